#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dirinv {

inline constexpr double kPi = std::numbers::pi;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec3 operator*(const Vec3& v, double s) { return s * v; }
inline Vec3 operator/(const Vec3& v, double s) { return {v.x / s, v.y / s, v.z / s}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) { a = a + b; return a; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Unit-length 3-vector. Construct through normalized() (which checks the
/// input) or unchecked() when unit norm is guaranteed by the math.
class UnitVec3 {
 public:
  UnitVec3() : v_{1.0, 0.0, 0.0} {}

  static UnitVec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 1e-12)) throw std::invalid_argument("UnitVec3: vector too close to zero");
    return UnitVec3(v / n);
  }
  static UnitVec3 unchecked(const Vec3& v) { return UnitVec3(v); }

  static UnitVec3 axis_x() { return UnitVec3({1.0, 0.0, 0.0}); }
  static UnitVec3 axis_y() { return UnitVec3({0.0, 1.0, 0.0}); }
  static UnitVec3 axis_z() { return UnitVec3({0.0, 0.0, 1.0}); }

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }

  UnitVec3 negated() const { return UnitVec3({-v_.x, -v_.y, -v_.z}); }

 private:
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

inline double dot(const UnitVec3& a, const UnitVec3& b) { return dot(a.vec(), b.vec()); }
inline Vec3 cross(const UnitVec3& a, const UnitVec3& b) { return cross(a.vec(), b.vec()); }

/// Element of SO(3) stored as a unit quaternion (w, x, y, z).
struct Orientation {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static Orientation identity() { return {}; }

  static Orientation from_axis_angle(const UnitVec3& axis, double angle) {
    const double h = 0.5 * angle;
    const double s = std::sin(h);
    return {std::cos(h), s * axis.x(), s * axis.y(), s * axis.z()};
  }

  double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

  Orientation normalized() const {
    const double n = norm();
    if (!(n > 1e-300)) throw std::domain_error("Orientation: cannot normalize zero quaternion");
    return {w / n, x / n, y / n, z / n};
  }

  Orientation inverse() const { return {w, -x, -y, -z}; }
  Orientation negated() const { return {-w, -x, -y, -z}; }
};

/// compose(a, b) applies b first, then a: rotate(compose(a, b), v) == rotate(a, rotate(b, v)).
inline Orientation compose(const Orientation& a, const Orientation& b) {
  const Orientation r{a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  return r.normalized();
}

inline Vec3 rotate(const Orientation& q, const Vec3& v) {
  const Vec3 u{q.x, q.y, q.z};
  const Vec3 t = 2.0 * cross(u, v);
  return v + q.w * t + cross(u, t);
}

inline UnitVec3 rotate(const Orientation& q, const UnitVec3& v) {
  return UnitVec3::unchecked(rotate(q, v.vec()));
}

/// Rotation about the vertical axis (0,1,0) by `angle`, right-hand rule.
inline Orientation yaw_rotation(double angle) {
  const double h = 0.5 * angle;
  return {std::cos(h), 0.0, std::sin(h), 0.0};
}

inline double quat_dot(const Orientation& a, const Orientation& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

/// Angle of the relative rotation between a and b, in [0, pi]. Insensitive to
/// quaternion sign.
inline double rotation_distance(const Orientation& a, const Orientation& b) {
  const Orientation d = compose(a, b.inverse());
  const double vn = std::sqrt(d.x * d.x + d.y * d.y + d.z * d.z);
  return 2.0 * std::atan2(vn, std::abs(d.w));
}

/// Flips quaternion signs in place so consecutive elements have non-negative dot.
void hemisphere_align(std::vector<Orientation>& qs);

/// Axis-angle rotation; angle in radians, kept in (-pi, pi].
struct AxisAngle {
  UnitVec3 axis;
  double angle = 0.0;
};

inline Orientation to_orientation(const AxisAngle& aa) {
  return Orientation::from_axis_angle(aa.axis, aa.angle);
}

/// Canonical axis-angle of q: w is flipped non-negative first, so the returned
/// angle is in [0, pi] and the axis carries the sign.
AxisAngle to_axis_angle(const Orientation& q);

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

/// Great-circle distance between unit vectors, in [0, pi]. Uses
/// atan2(|a x b|, a.b), which stays accurate near 0 and pi.
inline double geodesic_distance(const UnitVec3& a, const UnitVec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

/// Deterministic low-discrepancy sphere coverage (spherical Fibonacci
/// lattice with n points). Throws on n < 1.
std::vector<UnitVec3> sample_sphere(int n);

/// Shortest-arc rotation carrying `from` onto `to`. For (near-)antipodal
/// inputs there is no unique shortest arc; a 180-degree rotation about a
/// deterministic axis perpendicular to `from` is returned instead.
Orientation minimal_rotation(const UnitVec3& from, const UnitVec3& to);

}  // namespace dirinv
