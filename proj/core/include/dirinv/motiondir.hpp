#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dirinv/bvh.hpp"
#include "dirinv/rotmath.hpp"

namespace dirinv {

/// Outcome of motion-direction selection. `direction` is canonicalized over
/// the antipodal pair (y >= 0, then x >= 0, then z >= 0); `clearance` is the
/// achieved max-min geodesic distance between the orbit-sphere trajectory and
/// +-direction, always in [0, pi/2].
struct DirectionReport {
  UnitVec3 direction;
  double clearance = 0.0;
  int samples = 0;          // lattice size used; 0 when no lattice search ran
  std::string source;       // "x-axis", "z-axis", "lattice" or "explicit"
  bool refined = false;
  std::string tie_note;
  std::optional<std::vector<std::pair<UnitVec3, double>>> per_candidate;
};

struct SelectOptions {
  bool keep_per_candidate = false;
  bool refine = false;  // post-lattice local polish (golden-section on two tangent coordinates)
  int threads = 1;
};

/// Orbit-sphere trace of a trajectory: p_t = g_t^-1(Y).
std::vector<UnitVec3> orbit_trace(std::span<const Orientation> orientations);

/// Minimum over the trace of the distance to the nearer of +-candidate.
double candidate_clearance(std::span<const UnitVec3> trace, const UnitVec3& candidate);

/// Scores every candidate against the trace. Safe to evaluate in parallel;
/// entry i depends only on candidate i.
std::vector<double> score_candidates(std::span<const UnitVec3> trace,
                                     std::span<const UnitVec3> candidates, int threads = 1);

/// Max-min search over a deterministic sphere lattice of n_samples candidates:
/// picks the direction maximizing the minimum distance between the
/// orbit-sphere trajectory and the direction's antipodal pair. Ties within
/// 1e-12 break to the lowest lattice index.
DirectionReport select_motion_direction(const RootTrajectory& traj, int n_samples,
                                        const SelectOptions& options = {});

/// Ladder policy: accept the X axis if its clearance meets `threshold`, else
/// the Z axis, else fall back to the lattice search.
DirectionReport fallback_ladder(const RootTrajectory& traj, double threshold, int n_samples,
                                const SelectOptions& options = {});

/// Per-frame distance between the orbit-sphere trace and +-r. Its minimum is
/// the candidate's clearance.
std::vector<double> clearance_profile(const RootTrajectory& traj, const UnitVec3& r);

/// Evaluates one fixed candidate direction and wraps it in a report.
DirectionReport evaluate_direction(const RootTrajectory& traj, const UnitVec3& r,
                                   const std::string& source = "explicit");

/// Canonical representative of the antipodal pair {v, -v}.
UnitVec3 canonical_direction(const UnitVec3& v);

/// Human-readable report: direction, clearance in radians and degrees,
/// samples, tie-break note and the optional per-candidate table.
std::string direction_report_text(const DirectionReport& report);

}  // namespace dirinv
