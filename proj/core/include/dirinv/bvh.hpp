#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dirinv/rotmath.hpp"

namespace dirinv {

enum class Channel { x_position, y_position, z_position, x_rotation, y_rotation, z_rotation };

inline bool is_rotation(Channel c) {
  return c == Channel::x_rotation || c == Channel::y_rotation || c == Channel::z_rotation;
}
const char* channel_name(Channel c);

struct Joint {
  std::string name;
  std::optional<int> parent;       // none for the root
  Vec3 offset;                     // file length units
  std::vector<Channel> channels;   // order exactly as read
  std::optional<Vec3> end_offset;  // End Site offset, when present
};

struct Skeleton {
  std::vector<Joint> joints;  // topological order: parents precede children

  int channel_count() const;
  /// First channel index of joint j in a frame row.
  int channel_offset(int j) const;
};

/// Parsed BVH document: hierarchy plus raw per-frame channel rows
/// (rotations in degrees, positions in file units, exactly as stored).
struct MotionClip {
  Skeleton skeleton;
  double frame_time = 0.0;  // seconds
  std::vector<std::vector<double>> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
  double duration() const { return frame_time * frame_count(); }
  double fps() const { return 1.0 / frame_time; }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message)
      : std::runtime_error(std::to_string(line) + ": " + message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Parses a BVH document. Whitespace-insensitive, CRLF-tolerant; binary input
/// is rejected. Throws ParseError with the offending line number.
MotionClip parse_bvh(std::string_view text);

/// Serializes a clip back to BVH text. Numeric payload round-trips bit-for-bit
/// through parse_bvh.
std::string write_bvh(const MotionClip& clip);

/// Keeps every stride-th frame (starting at frame 0) and scales frame_time.
MotionClip decimate(const MotionClip& clip, int stride);

struct JointPose {
  Vec3 position;            // global, file units
  Orientation orientation;  // global
};

/// Global pose of every joint at one frame. The root entry carries the root
/// translation channels and the composed root rotation.
std::vector<JointPose> forward_kinematics(const MotionClip& clip, int frame);

/// Per-frame root orientation and position stream.
struct RootTrajectory {
  std::vector<Orientation> orientations;  // hemisphere-continuous
  std::vector<Vec3> positions;            // meters
  double frame_time = 0.0;

  int frame_count() const { return static_cast<int>(orientations.size()); }
};

/// Extracts the root transform stream. Requires three root rotation channels.
/// Positions are scaled by unit_scale (default converts centimeters to meters).
RootTrajectory root_trajectory(const MotionClip& clip, double unit_scale = 0.01);

/// Local rotation of joint j at one frame row, composed in channel order.
Orientation joint_rotation(const MotionClip& clip, const std::vector<double>& row, int j);

}  // namespace dirinv
