#include "dirinv/rotmath.hpp"

namespace dirinv {

void hemisphere_align(std::vector<Orientation>& qs) {
  for (std::size_t i = 1; i < qs.size(); ++i) {
    if (quat_dot(qs[i - 1], qs[i]) < 0.0) qs[i] = qs[i].negated();
  }
}

AxisAngle to_axis_angle(const Orientation& q_in) {
  const Orientation q = q_in.w < 0.0 ? q_in.negated() : q_in;
  const double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  const double angle = 2.0 * std::atan2(vn, q.w);
  if (vn < 1e-300) return {UnitVec3::axis_x(), 0.0};
  return {UnitVec3::unchecked({q.x / vn, q.y / vn, q.z / vn}), angle};
}

std::vector<UnitVec3> sample_sphere(int n) {
  if (n < 1) throw std::invalid_argument("sample_sphere: n must be >= 1");
  const double golden_angle = kPi * (3.0 - std::sqrt(5.0));
  std::vector<UnitVec3> points;
  points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double y = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - y * y));
    const double a = golden_angle * i;
    points.push_back(UnitVec3::normalized({rho * std::cos(a), y, rho * std::sin(a)}));
  }
  return points;
}

namespace {

// A unit vector perpendicular to v: normalized rejection of X from v, or of Z
// when v is (nearly) parallel to X.
UnitVec3 perpendicular_axis(const UnitVec3& v) {
  for (const Vec3 seed : {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0}}) {
    const Vec3 rej = seed - dot(seed, v.vec()) * v.vec();
    if (norm(rej) > 1e-6) return UnitVec3::normalized(rej);
  }
  // Unreachable: a unit vector cannot be parallel to both X and Z.
  return UnitVec3::normalized(cross(UnitVec3::axis_y().vec(), v.vec()));
}

}  // namespace

Orientation minimal_rotation(const UnitVec3& from, const UnitVec3& to) {
  const double c = dot(from, to);
  if (1.0 + c > 1e-12) {
    const Vec3 axis = cross(from, to);
    const Orientation half{1.0 + c, axis.x, axis.y, axis.z};
    return half.normalized();
  }
  return Orientation::from_axis_angle(perpendicular_axis(from), kPi);
}

}  // namespace dirinv
