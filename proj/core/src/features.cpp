#include "dirinv/features.hpp"

#include <algorithm>
#include <cmath>

namespace dirinv {

const char* scheme_name(FeatureScheme scheme) {
  switch (scheme) {
    case FeatureScheme::gf: return "gf";
    case FeatureScheme::dif: return "dif";
    case FeatureScheme::dim: return "dim";
  }
  return "?";
}

namespace {

bool is_facing_direction(const UnitVec3& r) { return r.x() == 1.0 && r.y() == 0.0 && r.z() == 0.0; }

// Current-minus-previous differences over dt; entry 0 copies entry 1.
std::vector<Vec3> difference_series(const std::vector<Vec3>& xs, double dt) {
  std::vector<Vec3> v(xs.size());
  for (std::size_t t = 1; t < xs.size(); ++t) v[t] = (xs[t] - xs[t - 1]) / dt;
  if (xs.size() > 1) v[0] = v[1];
  return v;
}

std::vector<double> heading_rate_series(const std::vector<double>& heading, double dt) {
  std::vector<double> rate(heading.size(), 0.0);
  for (std::size_t t = 1; t < heading.size(); ++t)
    rate[t] = wrap_angle(heading[t] - heading[t - 1]) / dt;
  if (heading.size() > 1) rate[0] = rate[1];
  return rate;
}

}  // namespace

std::vector<FeatureFrame> extract_features(const MotionClip& clip,
                                           const std::optional<MappingScheme>& scheme,
                                           const ExtractOptions& options) {
  const RootTrajectory traj = root_trajectory(clip, options.unit_scale);
  const int T = traj.frame_count();
  const double dt = traj.frame_time;
  const auto& joints = clip.skeleton.joints;
  const std::size_t J = joints.size();

  // Global joint positions in meters, per frame.
  std::vector<std::vector<Vec3>> pos(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    const auto poses = forward_kinematics(clip, t);
    pos[t].reserve(J);
    for (const JointPose& p : poses) pos[t].push_back(options.unit_scale * p.position);
  }

  // Global joint velocities.
  std::vector<std::vector<Vec3>> vel(static_cast<std::size_t>(T), std::vector<Vec3>(J));
  {
    std::vector<Vec3> series(static_cast<std::size_t>(T));
    for (std::size_t j = 0; j < J; ++j) {
      for (int t = 0; t < T; ++t) series[t] = pos[t][j];
      const auto d = difference_series(series, dt);
      for (int t = 0; t < T; ++t) vel[t][j] = d[t];
    }
  }
  const std::vector<Vec3> root_vel = difference_series(traj.positions, dt);

  std::vector<YawDecomposition> decomp;
  FeatureScheme tag = FeatureScheme::gf;
  if (scheme) {
    decomp = decompose_trajectory(traj.orientations, *scheme);
    tag = is_facing_direction(scheme->direction) ? FeatureScheme::dif : FeatureScheme::dim;
  }

  std::vector<double> heading(static_cast<std::size_t>(T), 0.0);
  if (scheme)
    for (int t = 0; t < T; ++t) heading[t] = -decomp[t].yaw.angle;
  const std::vector<double> rate = scheme ? heading_rate_series(heading, dt) : std::vector<double>();

  std::vector<FeatureFrame> out(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t) {
    FeatureFrame& f = out[t];
    f.scheme = tag;
    f.frame = t;
    f.time = t * dt;
    f.root_position = traj.positions[t];
    f.root_height = traj.positions[t].y;

    const Orientation gy = scheme ? yaw_rotation(decomp[t].yaw.angle) : Orientation::identity();
    const Vec3 vp = scheme ? rotate(gy, root_vel[t]) : root_vel[t];
    f.vpx = vp.x;
    f.vpz = vp.z;
    if (scheme) {
      f.yaw_rate = rate[t];
      f.yaw_angle = heading[t];
      f.g0 = decomp[t].g0;
      f.singular = decomp[t].singular;
    } else {
      f.g0 = traj.orientations[t];
    }

    f.joints.reserve(J > 0 ? J - 1 : 0);
    for (std::size_t j = 1; j < J; ++j) {
      const Vec3 rel = pos[t][j] - traj.positions[t];
      if (scheme)
        f.joints.push_back(JointFeature{rotate(gy, rel), rotate(gy, vel[t][j])});
      else
        f.joints.push_back(JointFeature{rel, vel[t][j]});
    }
  }

  // Exported quaternion stream is hemisphere-aligned over time, with the
  // global sign fixed by the first frame so equivalent clips export
  // identical streams.
  for (int t = 1; t < T; ++t)
    if (quat_dot(out[t - 1].g0, out[t].g0) < 0.0) out[t].g0 = out[t].g0.negated();
  if (T > 0) {
    const Orientation& head = out[0].g0;
    double lead = head.w;
    if (lead == 0.0) lead = head.x;
    if (lead == 0.0) lead = head.y;
    if (lead == 0.0) lead = head.z;
    if (lead < 0.0)
      for (FeatureFrame& f : out) f.g0 = f.g0.negated();
  }

  return out;
}

std::vector<double> yaw_rate_series(const RootTrajectory& traj, const MappingScheme& scheme) {
  const auto decomp = decompose_trajectory(traj.orientations, scheme);
  std::vector<double> heading(decomp.size());
  for (std::size_t t = 0; t < decomp.size(); ++t) heading[t] = -decomp[t].yaw.angle;
  return heading_rate_series(heading, traj.frame_time);
}

RootTrajectory reconstruct_trajectory(const std::vector<FeatureFrame>& frames, double initial_yaw,
                                      const PlanarPoint& initial_position) {
  if (frames.empty()) throw std::invalid_argument("reconstruct_trajectory: no frames");
  if (frames.front().scheme == FeatureScheme::gf)
    throw std::invalid_argument("reconstruct_trajectory: GF features carry no yaw rate to integrate");

  const double dt = frames.size() > 1 ? frames[1].time - frames[0].time : 0.0;
  RootTrajectory out;
  out.frame_time = dt;
  out.orientations.reserve(frames.size());
  out.positions.reserve(frames.size());

  double psi = initial_yaw;
  double px = initial_position.x;
  double pz = initial_position.z;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    const FeatureFrame& f = frames[t];
    if (!f.yaw_rate) throw std::invalid_argument("reconstruct_trajectory: frame missing yaw_rate");
    if (t > 0) {
      psi += *f.yaw_rate * dt;
      const Vec3 v_global = rotate(yaw_rotation(psi), Vec3{f.vpx, 0.0, f.vpz});
      px += v_global.x * dt;
      pz += v_global.z * dt;
    }
    out.positions.push_back(Vec3{px, f.root_height, pz});
    out.orientations.push_back(compose(yaw_rotation(psi), f.g0));
  }
  hemisphere_align(out.orientations);
  return out;
}

std::vector<std::string> feature_channel_names(const Skeleton& skeleton, FeatureScheme scheme) {
  std::vector<std::string> names{"root_h", "vpx", "vpz"};
  if (scheme != FeatureScheme::gf) names.push_back("yaw_rate");
  names.insert(names.end(), {"g0_w", "g0_x", "g0_y", "g0_z"});
  std::vector<std::string> seen;
  for (std::size_t j = 1; j < skeleton.joints.size(); ++j) {
    std::string base = skeleton.joints[j].name;
    if (std::find(seen.begin(), seen.end(), base) != seen.end()) base += "." + std::to_string(j);
    seen.push_back(base);
    for (const char* suffix : {"_px", "_py", "_pz", "_vx", "_vy", "_vz"}) names.push_back(base + suffix);
  }
  return names;
}

std::vector<double> feature_channel_values(const FeatureFrame& f) {
  std::vector<double> v{f.root_height, f.vpx, f.vpz};
  if (f.scheme != FeatureScheme::gf) v.push_back(f.yaw_rate.value_or(0.0));
  v.insert(v.end(), {f.g0.w, f.g0.x, f.g0.y, f.g0.z});
  for (const JointFeature& j : f.joints) {
    v.insert(v.end(), {j.rel_pos.x, j.rel_pos.y, j.rel_pos.z, j.lin_vel.x, j.lin_vel.y, j.lin_vel.z});
  }
  return v;
}

namespace {

// Channel matrix with the quaternion block hemisphere-aligned over time.
std::vector<std::vector<double>> channel_matrix(const std::vector<FeatureFrame>& frames) {
  std::vector<std::vector<double>> rows;
  rows.reserve(frames.size());
  const std::size_t quat_base = frames.front().scheme == FeatureScheme::gf ? 3 : 4;
  for (const FeatureFrame& f : frames) rows.push_back(feature_channel_values(f));
  for (std::size_t t = 1; t < rows.size(); ++t) {
    double d = 0.0;
    for (std::size_t k = 0; k < 4; ++k) d += rows[t - 1][quat_base + k] * rows[t][quat_base + k];
    if (d < 0.0)
      for (std::size_t k = 0; k < 4; ++k) rows[t][quat_base + k] = -rows[t][quat_base + k];
  }
  return rows;
}

}  // namespace

SmoothnessReport smoothness(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                            std::span<const double> thresholds) {
  if (frames.size() < 2) throw std::invalid_argument("smoothness: need at least two frames");
  const auto rows = channel_matrix(frames);
  const std::size_t C = rows.front().size();
  if (thresholds.size() != C)
    throw std::invalid_argument("smoothness: expected " + std::to_string(C) + " thresholds, got " +
                                std::to_string(thresholds.size()));

  SmoothnessReport report;
  report.channel_names = feature_channel_names(skeleton, frames.front().scheme);
  report.max_step.assign(C, 0.0);
  report.mean_step.assign(C, 0.0);
  for (std::size_t t = 1; t < rows.size(); ++t) {
    bool bad = false;
    for (std::size_t c = 0; c < C; ++c) {
      const double step = std::abs(rows[t][c] - rows[t - 1][c]);
      report.max_step[c] = std::max(report.max_step[c], step);
      report.mean_step[c] += step;
      if (step > thresholds[c]) bad = true;
    }
    if (bad) report.discontinuity_frames.push_back(static_cast<int>(t));
  }
  const double steps = static_cast<double>(rows.size() - 1);
  for (double& m : report.mean_step) m /= steps;
  return report;
}

SmoothnessReport smoothness(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                            double threshold) {
  const std::vector<double> thresholds(feature_channel_values(frames.front()).size(), threshold);
  return smoothness(frames, skeleton, thresholds);
}

std::vector<double> auto_thresholds(const std::vector<FeatureFrame>& reference, const Skeleton&) {
  if (reference.size() < 2) throw std::invalid_argument("auto_thresholds: need at least two frames");
  const auto rows = channel_matrix(reference);
  const std::size_t C = rows.front().size();
  std::vector<double> thresholds(C, 0.0);
  std::vector<double> deltas(rows.size() - 1);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t t = 1; t < rows.size(); ++t) deltas[t - 1] = std::abs(rows[t][c] - rows[t - 1][c]);
    std::sort(deltas.begin(), deltas.end());
    const std::size_t idx = static_cast<std::size_t>(0.99 * static_cast<double>(deltas.size() - 1));
    thresholds[c] = std::max(5.0 * deltas[idx], 1e-9);
  }
  return thresholds;
}

LinkState transform_link_state(const AxisAngle& yaw, const LinkState& state) {
  const Orientation q = to_orientation(yaw);
  return LinkState{rotate(q, state.position), compose(q, state.rotation),
                   rotate(q, state.linear_velocity), rotate(q, state.angular_velocity)};
}

}  // namespace dirinv
