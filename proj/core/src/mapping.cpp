#include "dirinv/mapping.hpp"

#include <cmath>

namespace dirinv {

namespace {

double nearer_pair_distance(const UnitVec3& q, const UnitVec3& r) {
  return std::min(geodesic_distance(q, r), geodesic_distance(q, r.negated()));
}

}  // namespace

double singularity_distance(const Orientation& g, const MappingScheme& scheme) {
  const UnitVec3 q = rotate(g.inverse(), UnitVec3::axis_y());
  return nearer_pair_distance(q, scheme.direction);
}

YawDecomposition compute_gy(const Orientation& g, const MappingScheme& scheme) {
  const UnitVec3& r = scheme.direction;
  const Vec3 rotated = rotate(g, r).vec();  // r' = g(r)

  // Signed horizontal angle carrying the projection of r' onto the projection
  // of r, about +Y: atan2 of the Y component of r'_h x r_h against r'_h . r_h.
  const double cross_y = rotated.z * r.x() - rotated.x * r.z();
  const double dot_h = rotated.x * r.x() + rotated.z * r.z();
  double theta = std::atan2(cross_y, dot_h);
  if (theta <= -kPi) theta = kPi;

  YawDecomposition d;
  d.yaw = AxisAngle{UnitVec3::axis_y(), theta};
  d.g0 = compose(yaw_rotation(theta), g);
  d.sing_distance = singularity_distance(g, scheme);
  d.singular = d.sing_distance < scheme.epsilon_sing;
  return d;
}

std::vector<YawDecomposition> decompose_trajectory(std::span<const Orientation> orientations,
                                                   const MappingScheme& scheme) {
  std::vector<YawDecomposition> out;
  out.reserve(orientations.size());
  double last_valid = 0.0;
  for (const Orientation& g : orientations) {
    YawDecomposition d = compute_gy(g, scheme);
    if (d.singular) {
      d.yaw.angle = last_valid;
      d.g0 = compose(yaw_rotation(last_valid), g);
    } else {
      last_valid = d.yaw.angle;
    }
    out.push_back(d);
  }
  return out;
}

bool orbit_equivalent(const Orientation& a, const Orientation& b, double tol) {
  const Orientation d = compose(a, b.inverse());
  // Swing-twist split about Y: the swing angle is the residual rotation after
  // the best yaw is removed; zero iff d is a pure Y rotation (or identity).
  const double twist = std::hypot(d.w, d.y);
  const double swing = 2.0 * std::atan2(std::hypot(d.x, d.z), twist);
  return swing <= tol;
}

std::vector<FieldSample> tangent_field(const MappingScheme& scheme, std::span<const UnitVec3> points) {
  std::vector<FieldSample> out;
  out.reserve(points.size());
  const UnitVec3 pole = UnitVec3::axis_y();
  const UnitVec3 seed = UnitVec3::axis_x();
  for (const UnitVec3& q : points) {
    if (nearer_pair_distance(q, scheme.direction) < scheme.epsilon_sing) {
      out.push_back(FieldSample{q, Vec3{}, true});
      continue;
    }
    const Orientation g = minimal_rotation(q, pole);  // g(q) = Y, hence g^-1(Y) = q
    const YawDecomposition d = compute_gy(g, scheme);
    out.push_back(FieldSample{q, rotate(d.g0.inverse(), seed).vec(), false});
  }
  return out;
}

namespace {

// Fixed orthonormal basis of the plane perpendicular to c.
std::pair<UnitVec3, UnitVec3> plane_basis(const UnitVec3& c) {
  Vec3 seed{1.0, 0.0, 0.0};
  Vec3 rej = seed - dot(seed, c.vec()) * c.vec();
  if (norm(rej) < 1e-6) {
    seed = Vec3{0.0, 0.0, 1.0};
    rej = seed - dot(seed, c.vec()) * c.vec();
  }
  const UnitVec3 u = UnitVec3::normalized(rej);
  const UnitVec3 v = UnitVec3::normalized(cross(c.vec(), u.vec()));
  return {u, v};
}

}  // namespace

double ring_turning(const MappingScheme& scheme, const UnitVec3& center, double radius, int n_samples) {
  if (n_samples < 8) throw std::invalid_argument("ring_turning: need at least 8 samples");
  if (!(radius > scheme.epsilon_sing) || !(radius < 0.5 * kPi))
    throw std::invalid_argument("ring_turning: radius must be in (epsilon_sing, pi/2)");
  const auto [u, v] = plane_basis(center);
  const double cr = std::cos(radius);
  const double sr = std::sin(radius);

  std::vector<UnitVec3> ring;
  ring.reserve(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    const double a = 2.0 * kPi * i / n_samples;
    const Vec3 p = cr * center.vec() + sr * (std::cos(a) * u.vec() + std::sin(a) * v.vec());
    ring.push_back(UnitVec3::normalized(p));
  }
  const std::vector<FieldSample> field = tangent_field(scheme, ring);

  double total = 0.0;
  double prev = 0.0;
  for (int i = 0; i <= n_samples; ++i) {
    const FieldSample& s = field[static_cast<std::size_t>(i % n_samples)];
    const double beta = std::atan2(dot(s.tangent, v.vec()), dot(s.tangent, u.vec()));
    if (i > 0) total += wrap_angle(beta - prev);
    prev = beta;
  }
  return total;
}

int ring_index(const MappingScheme& scheme, const UnitVec3& center, double radius, int n_samples) {
  return static_cast<int>(std::llround(ring_turning(scheme, center, radius, n_samples) / (2.0 * kPi)));
}

}  // namespace dirinv
