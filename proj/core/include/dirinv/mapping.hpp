#pragma once

#include <span>
#include <vector>

#include "dirinv/rotmath.hpp"

namespace dirinv {

/// A yaw-removal scheme induced by a motion direction r. The construction
/// degenerates exactly where the orbit-sphere point g^-1(Y) equals +-r, so the
/// scheme's two singular points are +-r. epsilon_sing is the geodesic radius
/// below which a frame is treated as singular.
struct MappingScheme {
  UnitVec3 direction;
  double epsilon_sing = 1e-3;

  explicit MappingScheme(const UnitVec3& r, double eps = 1e-3) : direction(r), epsilon_sing(eps) {
    if (std::hypot(r.x(), r.z()) == 0.0)
      throw std::invalid_argument("MappingScheme: direction parallel to the vertical axis has no horizontal reference");
    if (!(eps > 0.0) || !(eps < 0.5 * kPi))
      throw std::invalid_argument("MappingScheme: epsilon_sing must be in (0, pi/2)");
  }

  static MappingScheme facing() { return MappingScheme(UnitVec3::axis_x()); }
  static MappingScheme lateral() { return MappingScheme(UnitVec3::axis_z()); }
};

/// Result of removing the yaw of an orientation g: g0 = yaw ∘ g, with
/// yaw.axis exactly (0,1,0). sing_distance is the geodesic distance from the
/// orbit-sphere point g^-1(Y) to the nearer of +-r; `singular` is set when it
/// falls below the scheme threshold (the reported yaw angle is then
/// numerically unreliable).
struct YawDecomposition {
  AxisAngle yaw;
  Orientation g0;
  double sing_distance = 0.0;
  bool singular = false;
};

/// Yaw extraction: rotates the motion direction by g, measures the signed
/// horizontal angle carrying it back over the reference direction, and returns
/// the yaw rotation plus the yaw-free representative g0.
YawDecomposition compute_gy(const Orientation& g, const MappingScheme& scheme);

/// Geodesic distance from g^-1(Y) to the nearer of +-r; zero at a singularity.
double singularity_distance(const Orientation& g, const MappingScheme& scheme);

/// Sequential decomposition of a trajectory with hold-last-valid: frames
/// inside the singular threshold reuse the previous valid yaw angle and stay
/// flagged. A leading singular run holds yaw angle 0.
std::vector<YawDecomposition> decompose_trajectory(std::span<const Orientation> orientations,
                                                   const MappingScheme& scheme);

/// True when a and b differ only by a rotation about the vertical axis
/// (within tol radians), i.e. they belong to the same orbit.
bool orbit_equivalent(const Orientation& a, const Orientation& b, double tol);

/// One sample of the tangent field induced by a scheme. At singular points
/// (within epsilon_sing of +-r) the tangent is zeroed and `singular` set.
struct FieldSample {
  UnitVec3 point;
  Vec3 tangent;
  bool singular = false;
};

/// Evaluates the induced tangent field at the given sphere points: for each
/// point q, realize an orientation g with g^-1(Y) = q, decompose it, and emit
/// g0^-1(X). Tangents are perpendicular to their points; the field result does
/// not depend on which orbit member realizes q.
std::vector<FieldSample> tangent_field(const MappingScheme& scheme, std::span<const UnitVec3> points);

/// Total turning (radians) of the tangent field along the geodesic circle of
/// the given radius around `center`, measured against a fixed basis of the
/// plane perpendicular to `center`. Approximately 2*pi times the field index
/// enclosed by the ring.
double ring_turning(const MappingScheme& scheme, const UnitVec3& center, double radius, int n_samples);

/// Nearest integer winding number for ring_turning.
int ring_index(const MappingScheme& scheme, const UnitVec3& center, double radius, int n_samples);

}  // namespace dirinv
