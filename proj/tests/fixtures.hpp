#pragma once

#include <string>
#include <vector>

#include "dirinv/bvh.hpp"

// Synthetic clips used across the unit and acceptance suites. Each motion is
// described per frame by the root Euler angles of the fixture skeleton (whose
// root rotation channels are Yrotation Zrotation Xrotation, so the root
// orientation is Ry(yaw) ∘ Rz(z_tilt) ∘ Rx(x_tilt)) plus a root position in
// file units (centimeters under the default unit scale).
namespace fixtures {

struct RootSample {
  double yaw_deg = 0.0;
  double z_deg = 0.0;
  double x_deg = 0.0;
  dirinv::Vec3 pos{0.0, 95.0, 0.0};
};

// Three-joint skeleton (hip -> chest -> head) with deterministic small joint
// motion; root follows the samples.
std::string synthetic_bvh(const std::vector<RootSample>& samples, double frame_time = 1.0 / 60.0);

dirinv::MotionClip clip(const std::vector<RootSample>& samples, double frame_time = 1.0 / 60.0);
dirinv::RootTrajectory trajectory(const std::vector<RootSample>& samples,
                                  double frame_time = 1.0 / 60.0, double unit_scale = 0.01);

// Identity orientation, fixed position.
std::vector<RootSample> static_samples(int frames);

// Heading ramp over total_deg while walking a circle; orbit point stays put.
std::vector<RootSample> yaw_only_samples(int frames, double total_deg = 720.0);

// Constant heading rate in radians per second.
std::vector<RootSample> constant_rate_samples(int frames, double rate_rad_s, double fps = 60.0);

// Heading ramps up then back down; rate changes sign mid-clip.
std::vector<RootSample> reversal_samples(int frames);

// Full rotations about the lateral axis; the orbit point sweeps the X-Y great
// circle and hits +-X twice per cycle.
std::vector<RootSample> backflip_samples(int frames, int cycles);

// Fast heading ramp with two-axis tilt oscillation; neither coordinate axis is
// an obviously good motion direction.
std::vector<RootSample> spin_samples(int frames);

// A 75-degree swing about Z followed by a 75-degree swing about X: both the X
// and Z axes end up with only 15 degrees of clearance.
std::vector<RootSample> cross_samples(int frames);

// Wandering heading plus mild X tilt and a walked circle; stays well clear of
// the facing-direction singularities.
std::vector<RootSample> mixed_samples(int frames);

// Clip-level edits (fixture skeleton layout only).
dirinv::MotionClip yaw_rotate_clip(const dirinv::MotionClip& clip, double deg);
dirinv::MotionClip translate_clip(const dirinv::MotionClip& clip, const dirinv::Vec3& delta_file_units);

}  // namespace fixtures
