#include "dirinv/motiondir.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "numfmt.hpp"

namespace dirinv {

std::vector<UnitVec3> orbit_trace(std::span<const Orientation> orientations) {
  std::vector<UnitVec3> trace;
  trace.reserve(orientations.size());
  const UnitVec3 pole = UnitVec3::axis_y();
  for (const Orientation& g : orientations) trace.push_back(rotate(g.inverse(), pole));
  return trace;
}

double candidate_clearance(std::span<const UnitVec3> trace, const UnitVec3& candidate) {
  // Distance to the nearer of {c, -c} is atan2(|q x c|, |q . c|), in [0, pi/2].
  double best = 0.5 * kPi;
  for (const UnitVec3& q : trace) {
    const double d = std::atan2(norm(cross(q, candidate)), std::abs(dot(q, candidate)));
    if (d < best) best = d;
  }
  return best;
}

std::vector<double> score_candidates(std::span<const UnitVec3> trace,
                                     std::span<const UnitVec3> candidates, int threads) {
  std::vector<double> scores(candidates.size(), 0.0);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) scores[i] = candidate_clearance(trace, candidates[i]);
  };
  if (threads <= 1 || candidates.size() < 2) {
    work(0, candidates.size());
    return scores;
  }
  const std::size_t n = candidates.size();
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * n / workers;
    const std::size_t end = (w + 1) * n / workers;
    pool.emplace_back(work, begin, end);
  }
  for (auto& t : pool) t.join();
  return scores;
}

UnitVec3 canonical_direction(const UnitVec3& v) {
  bool flip = false;
  if (v.y() < 0.0) {
    flip = true;
  } else if (v.y() == 0.0) {
    if (v.x() < 0.0)
      flip = true;
    else if (v.x() == 0.0 && v.z() < 0.0)
      flip = true;
  }
  if (!flip) return v;
  // The +0.0 turns negated zeros back into positive zeros.
  return UnitVec3::unchecked({-v.x() + 0.0, -v.y() + 0.0, -v.z() + 0.0});
}

namespace {

constexpr double kTieTolerance = 1e-12;

std::pair<UnitVec3, UnitVec3> tangent_basis(const UnitVec3& r) {
  Vec3 seed{1.0, 0.0, 0.0};
  Vec3 rej = seed - dot(seed, r.vec()) * r.vec();
  if (norm(rej) < 1e-6) {
    seed = Vec3{0.0, 0.0, 1.0};
    rej = seed - dot(seed, r.vec()) * r.vec();
  }
  const UnitVec3 u = UnitVec3::normalized(rej);
  return {u, UnitVec3::normalized(cross(r.vec(), u.vec()))};
}

// Deterministic golden-section maximization on [lo, hi]; returns argmax.
template <typename F>
double golden_section_max(const F& f, double lo, double hi, int evals) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < evals; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? c : d;
}

// Fixed-budget local polish around the lattice argmax: alternating
// golden-section searches along the two tangent coordinates.
void refine_direction(std::span<const UnitVec3> trace, UnitVec3& r, double& score, int n_samples) {
  double h = 4.0 / std::sqrt(static_cast<double>(n_samples));
  for (int iter = 0; iter < 20; ++iter) {
    const auto [e1, e2] = tangent_basis(r);
    const UnitVec3& e = (iter % 2 == 0) ? e1 : e2;
    const auto eval = [&](double t) {
      return candidate_clearance(trace, UnitVec3::normalized(r.vec() + t * e.vec()));
    };
    const double t_best = golden_section_max(eval, -h, h, 24);
    const double s = eval(t_best);
    if (s > score) {
      r = UnitVec3::normalized(r.vec() + t_best * e.vec());
      score = s;
    }
    h *= 0.7;
  }
}

}  // namespace

DirectionReport select_motion_direction(const RootTrajectory& traj, int n_samples,
                                        const SelectOptions& options) {
  if (traj.frame_count() == 0) throw std::invalid_argument("select_motion_direction: empty trajectory");
  if (n_samples < 1) throw std::invalid_argument("select_motion_direction: n_samples must be >= 1");

  const std::vector<UnitVec3> trace = orbit_trace(traj.orientations);
  const std::vector<UnitVec3> lattice = sample_sphere(n_samples);
  const std::vector<double> scores = score_candidates(trace, lattice, options.threads);

  const double best_score = *std::max_element(scores.begin(), scores.end());
  std::size_t best = 0;
  int ties = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= best_score - kTieTolerance) {
      if (ties == 0) best = i;
      ++ties;
    }
  }

  DirectionReport report;
  report.samples = n_samples;
  report.source = "lattice";
  report.tie_note = ties > 1 ? std::to_string(ties) + " candidates within 1e-12 of the maximum; lowest lattice index kept"
                             : "argmax unique";

  UnitVec3 r = lattice[best];
  double score = scores[best];
  if (options.refine) {
    refine_direction(trace, r, score, n_samples);
    report.refined = true;
  }
  report.direction = canonical_direction(r);
  report.clearance = score;
  if (options.keep_per_candidate) {
    std::vector<std::pair<UnitVec3, double>> table;
    table.reserve(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i) table.emplace_back(lattice[i], scores[i]);
    report.per_candidate = std::move(table);
  }
  return report;
}

DirectionReport evaluate_direction(const RootTrajectory& traj, const UnitVec3& r,
                                   const std::string& source) {
  if (traj.frame_count() == 0) throw std::invalid_argument("evaluate_direction: empty trajectory");
  const std::vector<UnitVec3> trace = orbit_trace(traj.orientations);
  DirectionReport report;
  report.direction = canonical_direction(r);
  report.clearance = candidate_clearance(trace, r);
  report.samples = 0;
  report.source = source;
  return report;
}

DirectionReport fallback_ladder(const RootTrajectory& traj, double threshold, int n_samples,
                                const SelectOptions& options) {
  if (!(threshold > 0.0) || !(threshold <= 0.5 * kPi))
    throw std::invalid_argument("fallback_ladder: threshold must be in (0, pi/2]");
  DirectionReport x = evaluate_direction(traj, UnitVec3::axis_x(), "x-axis");
  if (x.clearance >= threshold) return x;
  DirectionReport z = evaluate_direction(traj, UnitVec3::axis_z(), "z-axis");
  if (z.clearance >= threshold) return z;
  return select_motion_direction(traj, n_samples, options);
}

std::vector<double> clearance_profile(const RootTrajectory& traj, const UnitVec3& r) {
  const std::vector<UnitVec3> trace = orbit_trace(traj.orientations);
  std::vector<double> profile;
  profile.reserve(trace.size());
  for (const UnitVec3& q : trace)
    profile.push_back(std::atan2(norm(cross(q, r)), std::abs(dot(q, r))));
  return profile;
}

std::string direction_report_text(const DirectionReport& report) {
  using detail::format_double;
  std::string out;
  out += "direction: (" + format_double(report.direction.x()) + ", " + format_double(report.direction.y()) +
         ", " + format_double(report.direction.z()) + ")\n";
  out += "clearance: " + format_double(report.clearance) + " rad (" +
         format_double(report.clearance * 180.0 / kPi) + " deg)\n";
  out += "source: " + report.source + "\n";
  out += "samples: " + std::to_string(report.samples) + "\n";
  if (!report.tie_note.empty()) out += "tie-break: " + report.tie_note + "\n";
  if (report.refined) out += "refined: yes\n";
  if (report.per_candidate) {
    out += "candidates:\n";
    for (const auto& [dir, score] : *report.per_candidate) {
      out += "  (" + format_double(dir.x()) + ", " + format_double(dir.y()) + ", " + format_double(dir.z()) +
             ") " + format_double(score) + "\n";
    }
  }
  return out;
}

}  // namespace dirinv
