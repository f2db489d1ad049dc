#include "fixtures.hpp"

#include <cassert>
#include <charconv>
#include <cmath>

namespace fixtures {

using dirinv::kPi;
using dirinv::MotionClip;
using dirinv::RootTrajectory;
using dirinv::Vec3;

namespace {

void append(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
  out += ' ';
}

}  // namespace

std::string synthetic_bvh(const std::vector<RootSample>& samples, double frame_time) {
  std::string out =
      "HIERARCHY\n"
      "ROOT hip\n"
      "{\n"
      "  OFFSET 0 0 0\n"
      "  CHANNELS 6 Xposition Yposition Zposition Yrotation Zrotation Xrotation\n"
      "  JOINT chest\n"
      "  {\n"
      "    OFFSET 0 20 0\n"
      "    CHANNELS 3 Zrotation Xrotation Yrotation\n"
      "    JOINT head\n"
      "    {\n"
      "      OFFSET 0 25 5\n"
      "      CHANNELS 3 Xrotation Yrotation Zrotation\n"
      "      End Site\n"
      "      {\n"
      "        OFFSET 0 10 0\n"
      "      }\n"
      "    }\n"
      "  }\n"
      "}\n"
      "MOTION\n"
      "Frames: " +
      std::to_string(samples.size()) + "\nFrame Time: ";
  append(out, frame_time);
  out.back() = '\n';
  const int T = static_cast<int>(samples.size());
  for (int t = 0; t < T; ++t) {
    const RootSample& s = samples[static_cast<std::size_t>(t)];
    append(out, s.pos.x);
    append(out, s.pos.y);
    append(out, s.pos.z);
    append(out, s.yaw_deg);
    append(out, s.z_deg);
    append(out, s.x_deg);
    const double u = static_cast<double>(t) / std::max(1, T - 1);
    // chest: Zrotation Xrotation Yrotation
    append(out, 8.0 * std::sin(2.0 * kPi * u));
    append(out, 5.0 * std::cos(2.0 * kPi * u));
    append(out, 3.0 * std::sin(4.0 * kPi * u));
    // head: Xrotation Yrotation Zrotation
    append(out, 4.0 * std::cos(2.0 * kPi * u));
    append(out, 6.0 * std::sin(2.0 * kPi * u + 0.5));
    append(out, 2.0 * std::cos(4.0 * kPi * u));
    out.back() = '\n';
  }
  return out;
}

MotionClip clip(const std::vector<RootSample>& samples, double frame_time) {
  return dirinv::parse_bvh(synthetic_bvh(samples, frame_time));
}

RootTrajectory trajectory(const std::vector<RootSample>& samples, double frame_time,
                          double unit_scale) {
  return dirinv::root_trajectory(clip(samples, frame_time), unit_scale);
}

std::vector<RootSample> static_samples(int frames) {
  return std::vector<RootSample>(static_cast<std::size_t>(frames),
                                 RootSample{0.0, 0.0, 0.0, Vec3{10.0, 95.0, -20.0}});
}

std::vector<RootSample> yaw_only_samples(int frames, double total_deg) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    const double u = static_cast<double>(t) / frames;
    RootSample& s = out[static_cast<std::size_t>(t)];
    s.yaw_deg = total_deg * u;
    s.pos = Vec3{150.0 * std::cos(2.0 * kPi * u), 95.0, 150.0 * std::sin(2.0 * kPi * u)};
  }
  return out;
}

std::vector<RootSample> constant_rate_samples(int frames, double rate_rad_s, double fps) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t)
    out[static_cast<std::size_t>(t)].yaw_deg = rate_rad_s * (t / fps) * 180.0 / kPi;
  return out;
}

std::vector<RootSample> reversal_samples(int frames) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  const int half = frames / 2;
  for (int t = 0; t < frames; ++t) {
    const int m = t <= half ? t : 2 * half - t;
    out[static_cast<std::size_t>(t)].yaw_deg = 0.9 * m;
  }
  return out;
}

std::vector<RootSample> backflip_samples(int frames, int cycles) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    RootSample& s = out[static_cast<std::size_t>(t)];
    s.z_deg = 360.0 * cycles * t / frames;
    s.pos = Vec3{0.0, 95.0 + 15.0 * std::sin(2.0 * kPi * cycles * t / frames), 30.0 * t / frames};
  }
  return out;
}

std::vector<RootSample> spin_samples(int frames) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    const double u = static_cast<double>(t) / frames;
    RootSample& s = out[static_cast<std::size_t>(t)];
    s.yaw_deg = 1080.0 * u;
    s.z_deg = 60.0 * std::sin(2.0 * kPi * 2.0 * u);
    s.x_deg = 35.0 * std::sin(2.0 * kPi * 3.0 * u + 0.7);
  }
  return out;
}

std::vector<RootSample> cross_samples(int frames) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  const int half = frames / 2;
  for (int t = 0; t < frames; ++t) {
    RootSample& s = out[static_cast<std::size_t>(t)];
    if (t < half) {
      s.z_deg = 75.0 * std::sin(2.0 * kPi * t / half);
    } else {
      s.x_deg = 75.0 * std::sin(2.0 * kPi * (t - half) / half);
    }
  }
  return out;
}

std::vector<RootSample> mixed_samples(int frames) {
  std::vector<RootSample> out(static_cast<std::size_t>(frames));
  for (int t = 0; t < frames; ++t) {
    const double u = static_cast<double>(t) / frames;
    RootSample& s = out[static_cast<std::size_t>(t)];
    s.yaw_deg = 90.0 * std::sin(2.0 * kPi * u) + 30.0 * std::sin(2.0 * kPi * 3.0 * u);
    s.x_deg = 25.0 * std::sin(2.0 * kPi * 2.0 * u);
    s.pos = Vec3{120.0 * std::cos(2.0 * kPi * u), 95.0 + 4.0 * std::sin(2.0 * kPi * 2.0 * u),
                 120.0 * std::sin(2.0 * kPi * u)};
  }
  return out;
}

MotionClip yaw_rotate_clip(const MotionClip& clip, double deg) {
  const auto& ch = clip.skeleton.joints.at(0).channels;
  assert(ch.size() == 6 && ch[3] == dirinv::Channel::y_rotation);
  (void)ch;
  MotionClip out = clip;
  const double rad = deg * kPi / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  for (auto& row : out.frames) {
    const double px = row[0];
    const double pz = row[2];
    row[0] = c * px + s * pz;
    row[2] = -s * px + c * pz;
    row[3] += deg;
  }
  return out;
}

MotionClip translate_clip(const MotionClip& clip, const Vec3& delta) {
  MotionClip out = clip;
  for (auto& row : out.frames) {
    row[0] += delta.x;
    row[1] += delta.y;
    row[2] += delta.z;
  }
  return out;
}

}  // namespace fixtures
