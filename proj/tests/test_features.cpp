#include <doctest.h>

#include "dirinv/export.hpp"
#include "dirinv/features.hpp"
#include "dirinv/motiondir.hpp"
#include "fixtures.hpp"
#include "test_util.hpp"

using namespace dirinv;
using testutil::max_abs_component_diff;
using testutil::quat_diff_up_to_sign;

namespace {

const std::optional<MappingScheme> kGF = std::nullopt;

std::optional<MappingScheme> dif() { return MappingScheme::facing(); }
std::optional<MappingScheme> dim(const UnitVec3& r) { return MappingScheme(r); }

double max_channel_diff(const std::vector<FeatureFrame>& a, const std::vector<FeatureFrame>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const auto va = feature_channel_values(a[t]);
    const auto vb = feature_channel_values(b[t]);
    REQUIRE(va.size() == vb.size());
    for (std::size_t c = 0; c < va.size(); ++c) worst = std::max(worst, std::abs(va[c] - vb[c]));
  }
  return worst;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("identity root: DIF features equal GF features up to bookkeeping") {
  const MotionClip clip = fixtures::clip(fixtures::static_samples(40));
  const auto gf = extract_features(clip, kGF);
  const auto df = extract_features(clip, dif());
  REQUIRE(gf.size() == df.size());
  for (std::size_t t = 0; t < gf.size(); ++t) {
    CHECK(gf[t].root_height == df[t].root_height);
    CHECK(std::abs(gf[t].vpx - df[t].vpx) < 1e-15);
    CHECK(std::abs(gf[t].vpz - df[t].vpz) < 1e-15);
    CHECK(!gf[t].yaw_rate);
    REQUIRE(df[t].yaw_rate.has_value());
    CHECK(*df[t].yaw_rate == 0.0);
    CHECK(quat_diff_up_to_sign(gf[t].g0, df[t].g0) < 1e-15);
    REQUIRE(gf[t].joints.size() == df[t].joints.size());
    for (std::size_t j = 0; j < gf[t].joints.size(); ++j) {
      CHECK(max_abs_component_diff(gf[t].joints[j].rel_pos, df[t].joints[j].rel_pos) < 1e-15);
      CHECK(max_abs_component_diff(gf[t].joints[j].lin_vel, df[t].joints[j].lin_vel) < 1e-15);
    }
  }
}

TEST_CASE("global yaw of the clip: DIF and DIM invariant, GF not") {
  const MotionClip clip = fixtures::clip(fixtures::mixed_samples(120));
  const MotionClip turned = fixtures::yaw_rotate_clip(clip, 137.0);

  CHECK(max_channel_diff(extract_features(clip, dif()), extract_features(turned, dif())) < 1e-9);
  const auto scheme = dim(UnitVec3::normalized({0.3, 0.1, 0.95}));
  CHECK(max_channel_diff(extract_features(clip, scheme), extract_features(turned, scheme)) < 1e-9);

  // GF differs by much more than noise on some channel.
  const auto gf_a = extract_features(clip, kGF);
  const auto gf_b = extract_features(turned, kGF);
  CHECK(max_channel_diff(gf_a, gf_b) > 1e-3);
}

TEST_CASE("DIF is exactly DIM with the facing direction") {
  const MotionClip clip = fixtures::clip(fixtures::mixed_samples(90));
  const auto a = extract_features(clip, dif());
  const auto b = extract_features(clip, dim(UnitVec3::normalized({1.0, 0.0, 0.0})));
  REQUIRE(a.size() == b.size());
  CHECK(b.front().scheme == FeatureScheme::dif);  // the special case is tagged as such
  for (std::size_t t = 0; t < a.size(); ++t) {
    CHECK(feature_channel_values(a[t]) == feature_channel_values(b[t]));
    CHECK(a[t].singular == b[t].singular);
  }
  CHECK(feature_csv(a, clip.skeleton) == feature_csv(b, clip.skeleton));
  CHECK(feature_jsonl(a, clip.skeleton) == feature_jsonl(b, clip.skeleton));
}

TEST_CASE("backflip: DIF breaks at the singular crossings, DIM with Z never does") {
  const MotionClip clip = fixtures::clip(fixtures::backflip_samples(480, 2));
  const auto frames_dif = extract_features(clip, dif());
  const auto frames_dim = extract_features(clip, dim(UnitVec3::axis_z()));

  std::vector<int> flagged;
  for (const FeatureFrame& f : frames_dif)
    if (f.singular) flagged.push_back(f.frame);
  CHECK(flagged == std::vector<int>{60, 180, 300, 420});  // two per flip cycle
  for (const FeatureFrame& f : frames_dim) CHECK(!f.singular);

  // Thresholds calibrated on the clip's best automatic direction.
  const auto auto_dir = select_motion_direction(root_trajectory(clip), 1024);
  const auto reference = extract_features(clip, dim(auto_dir.direction));
  const auto thresholds = auto_thresholds(reference, clip.skeleton);

  const auto report_dif = smoothness(frames_dif, clip.skeleton, thresholds);
  const auto report_dim = smoothness(frames_dim, clip.skeleton, thresholds);
  CHECK(!report_dif.empty());
  CHECK(report_dif.discontinuity_frames.size() >= 4);  // at least two per cycle
  CHECK(report_dim.empty());
}

TEST_CASE("yaw_rate_series") {
  SUBCASE("constant-rate yaw reads back the rate") {
    const RootTrajectory traj = fixtures::trajectory(fixtures::constant_rate_samples(600, 1.0));
    const auto series = yaw_rate_series(traj, MappingScheme::facing());
    for (double r : series) CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("static clip is all zeros") {
    const RootTrajectory traj = fixtures::trajectory(fixtures::static_samples(60));
    for (double r : yaw_rate_series(traj, MappingScheme::facing())) CHECK(r == 0.0);
  }
  SUBCASE("reversal changes sign without 2*pi jumps") {
    const int T = 400;
    const RootTrajectory traj = fixtures::trajectory(fixtures::reversal_samples(T));
    const auto series = yaw_rate_series(traj, MappingScheme::facing());
    const double nominal = 0.9 * kPi / 180.0 * 60.0;  // deg per frame at 60 fps
    CHECK(series[10] == doctest::Approx(nominal).epsilon(1e-9));
    CHECK(series[T - 10] == doctest::Approx(-nominal).epsilon(1e-9));
    for (double r : series) CHECK(std::abs(r) < 2.0 * nominal);
  }
}

TEST_CASE("reconstruction round trips") {
  SUBCASE("constant-rate yaw reconstructs exactly") {
    const MotionClip clip = fixtures::clip(fixtures::constant_rate_samples(600, 1.0));
    const RootTrajectory traj = root_trajectory(clip);
    const auto frames = extract_features(clip, dif());
    const RootTrajectory back = reconstruct_trajectory(frames, frames.front().yaw_angle,
                                                       {traj.positions[0].x, traj.positions[0].z});
    for (int t = 0; t < traj.frame_count(); ++t) {
      CHECK(max_abs_component_diff(back.positions[t], traj.positions[t]) < 1e-6);
      CHECK(rotation_distance(back.orientations[t], traj.orientations[t]) < 1e-6);
    }
  }

  SUBCASE("600-frame mixed clip stays within 5e-3") {
    const MotionClip clip = fixtures::clip(fixtures::mixed_samples(600));
    const RootTrajectory traj = root_trajectory(clip);
    const auto frames = extract_features(clip, dif());
    for (const FeatureFrame& f : frames) REQUIRE(!f.singular);
    const RootTrajectory back = reconstruct_trajectory(frames, frames.front().yaw_angle,
                                                       {traj.positions[0].x, traj.positions[0].z});
    double worst_pos = 0.0;
    double worst_rot = 0.0;
    for (int t = 0; t < traj.frame_count(); ++t) {
      worst_pos = std::max(worst_pos, norm(back.positions[t] - traj.positions[t]));
      worst_rot = std::max(worst_rot, rotation_distance(back.orientations[t], traj.orientations[t]));
    }
    CHECK(worst_pos < 5e-3);
    CHECK(worst_rot < 5e-3);
  }

  SUBCASE("zero rates give a constant trajectory") {
    std::vector<FeatureFrame> frames(50);
    for (int t = 0; t < 50; ++t) {
      frames[t].scheme = FeatureScheme::dif;
      frames[t].frame = t;
      frames[t].time = t / 60.0;
      frames[t].root_height = 0.9;
      frames[t].yaw_rate = 0.0;
      frames[t].g0 = Orientation::from_axis_angle(UnitVec3::axis_z(), 0.4);
    }
    const RootTrajectory back = reconstruct_trajectory(frames, 0.7, {1.0, -2.0});
    for (int t = 0; t < 50; ++t) {
      CHECK(max_abs_component_diff(back.positions[t], Vec3{1.0, 0.9, -2.0}) == 0.0);
      CHECK(quat_diff_up_to_sign(back.orientations[t], back.orientations[0]) == 0.0);
    }
  }

  SUBCASE("offsetting the initial yaw rotates the result rigidly") {
    const MotionClip clip = fixtures::clip(fixtures::mixed_samples(200));
    const auto frames = extract_features(clip, dif());
    const double phi = 0.8;
    const PlanarPoint origin{0.4, -0.2};
    const RootTrajectory a = reconstruct_trajectory(frames, frames.front().yaw_angle, origin);
    const RootTrajectory b = reconstruct_trajectory(frames, frames.front().yaw_angle + phi, origin);
    const Orientation y = yaw_rotation(phi);
    for (int t = 0; t < a.frame_count(); ++t) {
      const Vec3 pivot{origin.x, 0.0, origin.z};
      const Vec3 want = pivot + rotate(y, a.positions[t] - pivot);
      CHECK(std::abs(want.x - b.positions[t].x) < 1e-9);
      CHECK(std::abs(want.z - b.positions[t].z) < 1e-9);
      CHECK(b.positions[t].y == a.positions[t].y);
      CHECK(rotation_distance(b.orientations[t], compose(y, a.orientations[t])) < 1e-9);
    }
  }

  SUBCASE("GF features are rejected") {
    const MotionClip clip = fixtures::clip(fixtures::static_samples(10));
    const auto frames = extract_features(clip, kGF);
    CHECK_THROWS_AS(reconstruct_trajectory(frames, 0.0, {0.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("stored yaw plus root position reproduces global joint positions") {
  const MotionClip clip = fixtures::clip(fixtures::mixed_samples(150));
  const auto frames = extract_features(clip, dim(UnitVec3::normalized({0.2, 0.0, 0.9})));
  for (const FeatureFrame& f : frames) {
    if (f.singular) continue;
    const auto poses = forward_kinematics(clip, f.frame);
    const Orientation undo = yaw_rotation(f.yaw_angle);
    for (std::size_t j = 0; j < f.joints.size(); ++j) {
      const Vec3 global = rotate(undo, f.joints[j].rel_pos) + f.root_position;
      CHECK(norm(global - 0.01 * poses[j + 1].position) < 1e-6);
    }
  }
}

TEST_CASE("relative positions ignore global translation") {
  const MotionClip clip = fixtures::clip(fixtures::mixed_samples(80));
  const MotionClip moved = fixtures::translate_clip(clip, Vec3{480.0, -35.0, 260.0});
  const auto a = extract_features(clip, dif());
  const auto b = extract_features(moved, dif());
  for (std::size_t t = 0; t < a.size(); ++t) {
    for (std::size_t j = 0; j < a[t].joints.size(); ++j) {
      CHECK(max_abs_component_diff(a[t].joints[j].rel_pos, b[t].joints[j].rel_pos) < 1e-12);
      CHECK(max_abs_component_diff(a[t].joints[j].lin_vel, b[t].joints[j].lin_vel) < 1e-12);
    }
    CHECK(std::abs(a[t].vpx - b[t].vpx) < 1e-12);
    CHECK(std::abs(a[t].vpz - b[t].vpz) < 1e-12);
  }
}

TEST_CASE("smoothness") {
  const MotionClip clip = fixtures::clip(fixtures::static_samples(30));
  auto frames = extract_features(clip, dif());

  SUBCASE("constant frames: zero steps, empty report") {
    // Strip the joint sinusoid by zeroing velocities and positions.
    for (auto& f : frames)
      for (auto& j : f.joints) j = JointFeature{};
    const auto report = smoothness(frames, clip.skeleton, 1e-9);
    CHECK(report.empty());
    for (double m : report.max_step) CHECK(m == 0.0);
  }

  SUBCASE("an injected jump is localized") {
    const double threshold = 0.5;
    frames[17].vpx += 10.0 * threshold;
    frames[18].vpx = frames[16].vpx;  // jump in, jump out
    const auto report = smoothness(frames, clip.skeleton, threshold);
    CHECK(report.discontinuity_frames == std::vector<int>{17, 18});
  }

  SUBCASE("quaternion channels compare after hemisphere alignment") {
    for (std::size_t t = 0; t < frames.size(); ++t)
      if (t % 2 == 1) frames[t].g0 = frames[t].g0.negated();
    const auto report = smoothness(frames, clip.skeleton, 1e-3);
    for (std::size_t c = 0; c < report.channel_names.size(); ++c) {
      if (report.channel_names[c].rfind("g0_", 0) == 0) CHECK(report.max_step[c] < 1e-9);
    }
  }

  SUBCASE("threshold count is validated") {
    const std::vector<double> wrong(3, 1.0);
    CHECK_THROWS_AS(smoothness(frames, clip.skeleton, wrong), std::invalid_argument);
  }
}

TEST_CASE("channel names and order") {
  const MotionClip clip = fixtures::clip(fixtures::static_samples(4));
  const auto names = feature_channel_names(clip.skeleton, FeatureScheme::dif);
  const std::vector<std::string> expect{
      "root_h", "vpx", "vpz", "yaw_rate", "g0_w", "g0_x", "g0_y", "g0_z",
      "chest_px", "chest_py", "chest_pz", "chest_vx", "chest_vy", "chest_vz",
      "head_px", "head_py", "head_pz", "head_vx", "head_vy", "head_vz"};
  CHECK(names == expect);
  const auto gf_names = feature_channel_names(clip.skeleton, FeatureScheme::gf);
  CHECK(std::find(gf_names.begin(), gf_names.end(), "yaw_rate") == gf_names.end());
  CHECK(gf_names.size() == names.size() - 1);

  const auto frames = extract_features(clip, dif());
  CHECK(feature_channel_values(frames[0]).size() == names.size());
}

TEST_CASE("single-frame clip: velocities and rates default to zero") {
  const MotionClip clip = fixtures::clip(fixtures::static_samples(1));
  const auto frames = extract_features(clip, dif());
  REQUIRE(frames.size() == 1);
  CHECK(frames[0].vpx == 0.0);
  CHECK(frames[0].vpz == 0.0);
  CHECK(*frames[0].yaw_rate == 0.0);
  for (const auto& j : frames[0].joints) CHECK(norm(j.lin_vel) == 0.0);
}

TEST_CASE("transform_link_state rotates every component consistently") {
  const AxisAngle yaw{UnitVec3::axis_y(), 0.0};
  const LinkState s{Vec3{1, 2, 3}, Orientation::from_axis_angle(UnitVec3::axis_x(), 0.7), Vec3{0.1, 0, -0.4},
                    Vec3{0, 2, 0}};
  const LinkState id = transform_link_state(yaw, s);
  CHECK(max_abs_component_diff(id.position, s.position) == 0.0);
  CHECK(quat_diff_up_to_sign(id.rotation, s.rotation) < 1e-15);

  const AxisAngle quarter{UnitVec3::axis_y(), kPi / 2};
  const LinkState r = transform_link_state(quarter, s);
  const Orientation q = to_orientation(quarter);
  CHECK(max_abs_component_diff(r.position, rotate(q, s.position)) == 0.0);
  CHECK(max_abs_component_diff(r.linear_velocity, rotate(q, s.linear_velocity)) == 0.0);
  CHECK(max_abs_component_diff(r.angular_velocity, rotate(q, s.angular_velocity)) == 0.0);
  CHECK(quat_diff_up_to_sign(r.rotation, compose(q, s.rotation)) < 1e-15);
  // Rotating a link state by the yaw of its own frame leaves relative geometry intact:
  // lengths are preserved.
  CHECK(norm(r.position) == doctest::Approx(norm(s.position)).epsilon(1e-12));
}

TEST_SUITE_END();
