#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dirinv/bvh.hpp"
#include "dirinv/mapping.hpp"

namespace dirinv {

enum class FeatureScheme { gf, dif, dim };

const char* scheme_name(FeatureScheme scheme);

struct JointFeature {
  Vec3 rel_pos;  // joint position minus root position, meters, scheme frame
  Vec3 lin_vel;  // joint velocity, meters/second, scheme frame
};

/// One frame of GF, DIF or DIM features. GF keeps everything in the global
/// frame and stores the full root orientation in g0; DIF/DIM store quantities
/// rotated by the extracted yaw, the yaw-free orientation g0, and the heading
/// rate needed to reintegrate the global trajectory.
struct FeatureFrame {
  FeatureScheme scheme = FeatureScheme::gf;
  int frame = 0;
  double time = 0.0;
  double root_height = 0.0;             // meters
  double vpx = 0.0;                     // planar root velocity, scheme frame
  double vpz = 0.0;
  std::optional<double> yaw_rate;       // radians/second; absent for GF
  Orientation g0;                       // yaw-free root orientation (global for GF)
  std::vector<JointFeature> joints;     // non-root joints, skeleton order
  bool singular = false;

  // Bookkeeping for reconstruction and verification; not exported.
  double yaw_angle = 0.0;               // heading: g = yaw(yaw_angle) ∘ g0; 0 for GF
  Vec3 root_position;                   // meters, global
};

struct ExtractOptions {
  double unit_scale = 0.01;  // file length units to meters
};

/// Extracts per-frame features from a parsed clip. Pass a MappingScheme for
/// DIF/DIM (a scheme whose direction is exactly (1,0,0) is tagged dif), or
/// std::nullopt for GF. Velocities are current-minus-previous differences over
/// frame_time with frame 0 copying frame 1; singular frames follow the
/// hold-last-valid policy and come back flagged, never as errors.
std::vector<FeatureFrame> extract_features(const MotionClip& clip,
                                           const std::optional<MappingScheme>& scheme,
                                           const ExtractOptions& options = {});

/// Heading rate about +Y per frame (radians/second): wrapped per-step heading
/// difference divided by frame_time, frame 0 copying frame 1.
std::vector<double> yaw_rate_series(const RootTrajectory& traj, const MappingScheme& scheme);

struct PlanarPoint {
  double x = 0.0;
  double z = 0.0;
};

/// Integrates DIF/DIM features back into a root trajectory: heading
/// accumulates yaw_rate, planar position accumulates the planar velocity
/// rotated back by the accumulated heading, orientation is yaw(heading) ∘ g0,
/// height is copied. GF frames are rejected.
RootTrajectory reconstruct_trajectory(const std::vector<FeatureFrame>& frames, double initial_yaw,
                                      const PlanarPoint& initial_position);

/// Stable channel names in export order: root_h, vpx, vpz, yaw_rate (DIF/DIM
/// only), g0_w..g0_z, then per non-root joint <name>_px.. <name>_vz.
std::vector<std::string> feature_channel_names(const Skeleton& skeleton, FeatureScheme scheme);

/// Numeric values of one frame in feature_channel_names order.
std::vector<double> feature_channel_values(const FeatureFrame& frame);

struct SmoothnessReport {
  std::vector<std::string> channel_names;
  std::vector<double> max_step;        // per-channel max |frame-to-frame delta|
  std::vector<double> mean_step;       // per-channel mean |delta|
  std::vector<int> discontinuity_frames;  // frames in [1, T-1] where any channel exceeds its threshold

  bool empty() const { return discontinuity_frames.empty(); }
};

/// Frame-to-frame channel deltas against per-channel thresholds. Quaternion
/// channels are hemisphere-aligned over time before differencing. Requires at
/// least two frames.
SmoothnessReport smoothness(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                            std::span<const double> thresholds);
SmoothnessReport smoothness(const std::vector<FeatureFrame>& frames, const Skeleton& skeleton,
                            double threshold);

/// Self-calibrating thresholds: per channel, 5x the 99th-percentile |delta| of
/// the reference stream, floored at 1e-9.
std::vector<double> auto_thresholds(const std::vector<FeatureFrame>& reference, const Skeleton& skeleton);

/// Rigid-link state in the global frame (positions relative to the root).
struct LinkState {
  Vec3 position;
  Orientation rotation;
  Vec3 linear_velocity;
  Vec3 angular_velocity;
};

/// Rotates a link state into the frame selected by an extracted yaw: vectors
/// are rotated by the yaw, the rotation is pre-composed with it.
LinkState transform_link_state(const AxisAngle& yaw, const LinkState& state);

}  // namespace dirinv
