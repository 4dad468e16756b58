#include "scenes.hpp"
#include "support.hpp"
#include "worldtraj/errors.hpp"
#include "worldtraj/metrics.hpp"

namespace wt_test {
namespace {

JointSequence walk_joints(std::size_t frames = 200, std::uint64_t seed = 1) {
  MotionParams p;
  p.heading = 0.3;
  return generate_motion(MotionKind::CircleWalk, p, frames, seed).joints;
}

JointSequence map_joints(const JointSequence& s, const std::function<Vec3(std::size_t, std::size_t, const Vec3&)>& f,
                         CoordinateFrame frame = CoordinateFrame::World) {
  std::vector<JointFrame> out = s.frames();
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) out[i][j] = f(i, j, out[i][j]);
  }
  return JointSequence(std::move(out), frame, s.frame_rate());
}

TEST(SegmentSequence, Examples) {
  const auto s = segment_sequence(250);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].first, 200u);
  EXPECT_EQ(s[2].count, 50u);
  EXPECT_TRUE(s[2].partial);
  EXPECT_FALSE(s[0].partial);
  EXPECT_EQ(segment_sequence(100).size(), 1u);
  EXPECT_EQ(segment_sequence(201).size(), 2u);  // 1-frame tail dropped
  expect_error([] { segment_sequence(1); }, ErrorKind::TooShort);
}

TEST(WMpjpe, ZeroOnIdenticalAndRotated) {
  const JointSequence gt = walk_joints();
  EXPECT_NEAR(w_mpjpe_100(gt, gt), 0.0, 1e-9);
  const Rotation3 r = Rotation3::about_z(30 * kDeg);
  const JointSequence rotated = map_joints(gt, [&](std::size_t, std::size_t, const Vec3& p) { return Vec3(r * p); });
  EXPECT_NEAR(w_mpjpe_100(rotated, gt), 0.0, 1e-9);
}

TEST(WMpjpe, LateOffsetHalfSegment) {
  const JointSequence gt = walk_joints(100);
  const JointSequence est = map_joints(gt, [](std::size_t i, std::size_t, const Vec3& p) {
    return i >= 50 ? Vec3(p + Vec3(0.1, 0, 0)) : p;
  });
  EXPECT_NEAR(w_mpjpe_100(est, gt), 50.0, 1e-6);
}

TEST(WaMpjpe, AbsorbsUniformScale) {
  const JointSequence gt = walk_joints();
  const JointSequence est = map_joints(gt, [](std::size_t, std::size_t, const Vec3& p) { return Vec3(2.0 * p); });
  EXPECT_NEAR(wa_mpjpe_100(est, gt), 0.0, 1e-9);
}

TEST(WaMpjpe, JitterPositiveAndBoundedByW) {
  const JointSequence gt = walk_joints();
  Gen g(81);
  const JointSequence est = map_joints(gt, [&](std::size_t, std::size_t, const Vec3& p) { return Vec3(p + g.gaussian_vec(0.01)); });
  const WorldJointErrors e = world_joint_errors(est, gt);
  EXPECT_GT(e.wa_mpjpe, 0.0);
  EXPECT_LE(e.wa_mpjpe, e.w_mpjpe);
}

TEST(WorldJointErrors, RequiresWorldFrame) {
  const JointSequence gt = walk_joints(20);
  const JointSequence cam = map_joints(gt, [](std::size_t, std::size_t, const Vec3& p) { return p; }, CoordinateFrame::Camera);
  expect_error([&] { world_joint_errors(cam, gt); }, ErrorKind::WrongFrame);
  const JointSequence shorter = walk_joints(19);
  expect_error([&] { world_joint_errors(shorter, gt); }, ErrorKind::LengthMismatch);
}

TEST(Ate, Examples) {
  Gen g(82);
  const Trajectory gt = g.trajectory(50, 0.2);
  const AteResult same = ate(gt, gt);
  EXPECT_NEAR(same.ate_mm, 0.0, 1e-9);
  EXPECT_NEAR(same.alignment_scale, 1.0, 1e-12);
  Trajectory small = gt;
  for (auto& p : small.poses) p.translation *= 0.2;
  const AteResult scaled = ate(small, gt);
  EXPECT_NEAR(scaled.ate_mm, 0.0, 1e-9);
  EXPECT_NEAR(scaled.alignment_scale, 5.0, 1e-9);
  Trajectory two;
  two.poses.resize(2);
  expect_error([&] { ate(two, two); }, ErrorKind::TooShort);
}

TEST(Ate, GaussianNoiseMatchesMonteCarloOracle) {
  // E|n| for isotropic 3D Gaussian noise is sigma * 2 sqrt(2/pi); the fit
  // absorbs 7 of 3N degrees of freedom.
  Gen g(83);
  const Trajectory gt = g.trajectory(200, 0.3);
  const double sigma = 0.010;
  double sum = 0.0;
  for (int seed = 0; seed < 50; ++seed) {
    Trajectory est = gt;
    for (auto& p : est.poses) p.translation += g.gaussian_vec(sigma);
    sum += ate(est, gt).ate_mm;
  }
  const double oracle = 1000.0 * sigma * 2.0 * std::sqrt(2.0 / kPi) * std::sqrt(1.0 - 7.0 / 600.0);
  EXPECT_NEAR(sum / 50.0, oracle, 0.15 * oracle);
}

TEST(AteProperty, InvariantToSimilarityAndScaleComposes) {
  Gen g(84);
  for (int n = 0; n < 100; ++n) {
    const Trajectory gt = g.trajectory(40, 0.3);
    Trajectory est = gt;
    for (auto& p : est.poses) p.translation += g.gaussian_vec(0.02);
    const AteResult base = ate(est, gt);
    const SimilarityTransform sim = g.similarity();
    Trajectory moved = est;
    for (auto& p : moved.poses) p.translation = sim.apply(p.translation);
    const AteResult after = ate(moved, gt);
    EXPECT_NEAR(after.ate_mm, base.ate_mm, 1e-7 * std::max(1.0, base.ate_mm));
    EXPECT_NEAR(after.alignment_scale * sim.scale, base.alignment_scale, 1e-9 * base.alignment_scale);
  }
}

TEST(CameraFrame, ZeroOnIdenticalAndRootShiftSplit) {
  const JointSequence gt = map_joints(walk_joints(30), [](std::size_t, std::size_t, const Vec3& p) {
    return Vec3(p + Vec3(0, 0, 4));
  }, CoordinateFrame::Camera);
  const CameraFrameErrors zero = camera_frame_errors(gt, gt);
  EXPECT_EQ(zero.mpjpe, 0.0);
  EXPECT_NEAR(zero.pa_mpjpe, 0.0, 1e-9);
  EXPECT_EQ(zero.t_mpjpe, 0.0);
  EXPECT_EQ(zero.accel, 0.0);
  const JointSequence shifted = map_joints(gt, [](std::size_t, std::size_t, const Vec3& p) {
    return Vec3(p + Vec3(0, 0, 1));
  }, CoordinateFrame::Camera);
  const CameraFrameErrors e = camera_frame_errors(shifted, gt);
  EXPECT_NEAR(e.mpjpe, 0.0, 1e-9);
  EXPECT_NEAR(e.t_mpjpe, 1000.0, 1e-9);
}

TEST(CameraFrame, SingleFrameSpikeStencil) {
  // Constant-velocity ground truth; a 10 mm spike at frame 10 enters three
  // second differences with weights 1, -2, 1: 4 * 10 mm per joint.
  std::vector<JointFrame> frames(20);
  Gen g(85);
  const JointFrame base = g.joint_frame();
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) frames[i][j] = base[j] + Vec3(0.04 * i, 0, 0);
  }
  const JointSequence gt(frames, CoordinateFrame::Camera, 30.0);
  for (auto& p : frames[10]) p += Vec3(0, 0.010, 0);
  const JointSequence est(frames, CoordinateFrame::Camera, 30.0);
  // 900 * 0.04 / 18
  EXPECT_NEAR(camera_frame_errors(est, gt).accel, 2.0, 1e-9);
}

TEST(MetricProperty, OrderingsOverRandomPerturbations) {
  Gen g(86);
  const JointSequence gt_world = walk_joints(100, 2);
  const JointSequence gt_cam = map_joints(gt_world, [](std::size_t, std::size_t, const Vec3& p) {
    return Vec3(p + Vec3(0, 0, 5));
  }, CoordinateFrame::Camera);
  for (int n = 0; n < 100; ++n) {
    const double jitter = g.uniform(0.001, 0.02);
    const Vec3 offset = g.unit() * g.uniform(0.1, 0.5);
    const Rotation3 tilt = g.small_rotation(0.2);
    const JointSequence est_cam = map_joints(gt_cam, [&](std::size_t i, std::size_t j, const Vec3& p) {
      const Vec3 root = gt_cam[i][idx(Joint::Pelvis)];
      return Vec3(root + offset + tilt * (p - root) + (j == 0 ? Vec3::Zero() : g.gaussian_vec(jitter)));
    }, CoordinateFrame::Camera);
    const CameraFrameErrors c = camera_frame_errors(est_cam, gt_cam);
    EXPECT_LE(c.pa_mpjpe, c.mpjpe);
    EXPECT_LE(c.mpjpe, c.t_mpjpe);
    EXPECT_GE(c.accel, 0.0);

    const JointSequence est_world = map_joints(gt_world, [&](std::size_t i, std::size_t, const Vec3& p) {
      return Vec3(p + g.gaussian_vec(jitter) + offset * (static_cast<double>(i) / 100.0));
    });
    const WorldJointErrors w = world_joint_errors(est_world, gt_world);
    EXPECT_LE(w.wa_mpjpe, w.w_mpjpe);
    EXPECT_GE(w.wa_mpjpe, 0.0);
  }
}

TEST(Evaluate, FillsRequestedParts) {
  const SyntheticScene s = generate_scene(walk_tracking_config(3, 150));
  EvaluationInput in;
  in.est_human = s.gt_human;
  in.gt_human = s.gt_human;
  in.est_joints_world = s.gt_joints_world;
  in.gt_joints_world = s.gt_joints_world;
  const SegmentReport r = evaluate(in);
  ASSERT_TRUE(r.human);
  ASSERT_TRUE(r.world);
  EXPECT_FALSE(r.camera);
  EXPECT_FALSE(r.camera_frame);
  EXPECT_EQ(r.world->segments.size(), 2u);
  EXPECT_TRUE(r.world->segments[1].segment.partial);
  EXPECT_EQ(r.frames, 150u);
}

}  // namespace
}  // namespace wt_test
