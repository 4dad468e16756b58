#include "scenes.hpp"
#include "support.hpp"
#include "worldtraj/depth.hpp"
#include "worldtraj/errors.hpp"
#include "worldtraj/fusion.hpp"

namespace wt_test {
namespace {

WeakPerspectiveObservation obs_with(double s, double tx = 0.0, double ty = 0.0) {
  WeakPerspectiveObservation o;
  o.scale = s;
  o.t_x = tx;
  o.t_y = ty;
  return o;
}

CameraIntrinsics intrinsics(double f, int crop) { return CameraIntrinsics::exact(f, 1920, 1080, crop); }

TEST(RecoverRootDepth, Examples) {
  EXPECT_DOUBLE_EQ(recover_root_depth(obs_with(1.0), intrinsics(112, 224)), 1.0);
  EXPECT_DOUBLE_EQ(recover_root_depth(obs_with(7.8125), intrinsics(5000, 256)), 5.0);
  EXPECT_DOUBLE_EQ(recover_root_depth(obs_with(7.8125), intrinsics(1000, 256)), 1.0);
  // 2 * 5000 / (256 * 1e6)
  EXPECT_NEAR(recover_root_depth(obs_with(1e6), intrinsics(5000, 256)), 3.90625e-5, 1e-18);
}

TEST(RecoverRootDepth, ForwardProjectionOracle) {
  // Place a root at depth d, emit the pinhole scale, recover d.
  for (const double d : {1.0, 2.5, 5.0, 9.0}) {
    const CameraIntrinsics k = intrinsics(5000, 256);
    const double s = 2.0 * k.focal_px / (k.crop_resolution * d);
    EXPECT_NEAR(recover_root_depth(obs_with(s), k), d, 1e-12);
  }
}

TEST(RecoverRootDepth, MonotoneDecreasingInScale) {
  const CameraIntrinsics k = intrinsics(5000, 256);
  double prev = std::numeric_limits<double>::infinity();
  for (double s = 1e-3; s < 1e7; s *= 1.7) {
    const double d = recover_root_depth(obs_with(s), k);
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(RecoverRootDepth, RejectsNonPositiveScale) {
  expect_error([] { recover_root_depth(obs_with(0.0), intrinsics(1000, 256)); }, ErrorKind::NonPositiveScale);
  expect_error([] { recover_root_depth(obs_with(-1.0), intrinsics(1000, 256)); }, ErrorKind::NonPositiveScale);
}

TEST(RecoverRootDepthProperty, InverseInScaleLinearInFocal) {
  Gen g(21);
  for (int i = 0; i < 500; ++i) {
    const double s = g.uniform(0.01, 100.0), f = g.uniform(100.0, 10000.0), c = g.uniform(1.0, 10.0);
    const CameraIntrinsics k = intrinsics(f, g.integer(64, 512));
    const double base = recover_root_depth(obs_with(s), k);
    EXPECT_NEAR(recover_root_depth(obs_with(c * s), k), base / c, 1e-12 * base);
    CameraIntrinsics kf = k;
    kf.focal_px = c * f;
    EXPECT_NEAR(recover_root_depth(obs_with(s), kf), c * base, 1e-12 * c * base);
  }
}

TEST(RootTranslationCamera, Examples) {
  EXPECT_VEC_NEAR(root_translation_camera(obs_with(1.0), intrinsics(112, 224)), Vec3(0, 0, 1), 0.0);
  EXPECT_VEC_NEAR(root_translation_camera(obs_with(7.8125, 0.3, -0.1), intrinsics(5000, 256)), Vec3(0.3, -0.1, 5.0),
                  1e-15);
}

TEST(RootTranslationCamera, SimulatedSubjectAtThreeMeters) {
  const CameraIntrinsics k = intrinsics(1000, 256);
  const Vec3 truth(0.5, 0.2, 3.0);
  const SyntheticScene scene = facing_scene(truth, 4, k);
  const auto obs = simulate_ehps(scene, 0.0, 0, EhpsMode::PinholeFit);
  for (const auto& o : obs) {
    const Vec3 t = root_translation_camera(o, k);
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(t[c], truth[c], 0.02 * std::abs(truth[c])) << "component " << c;
  }
}

TEST(ProjectWeakPerspective, Examples) {
  EXPECT_VEC_NEAR(project_weak_perspective(Vec3::Zero(), obs_with(1.0)), Vec2(0, 0), 0.0);
  EXPECT_VEC_NEAR(project_weak_perspective(Vec3(0.5, 0, 0), obs_with(0.5, 0.1, 0.0)), Vec2(0.3, 0), 1e-15);
}

TEST(ProjectWeakPerspective, AgreesWithPinholeWithinDepthRatio) {
  const CameraIntrinsics k = intrinsics(1000, 256);
  const double tz = 5.0;
  const WeakPerspectiveObservation o = obs_with(k.ndc_focal() / tz, 0.4, -0.2);
  Gen g(22);
  for (int i = 0; i < 200; ++i) {
    const Vec3 d(g.uniform(-0.5, 0.5), g.uniform(-0.8, 0.8), g.uniform(-0.3, 0.3));
    const Vec2 weak = project_weak_perspective(d, o);
    const Vec2 pin = k.ndc_focal() * Vec2(o.t_x + d.x(), o.t_y + d.y()) / (tz + d.z());
    EXPECT_LE((weak - pin).norm() / pin.norm(), 0.065);
  }
}

TEST(Intrinsics, Factories) {
  const CameraIntrinsics d = CameraIntrinsics::diagonal_heuristic(1920, 1080, 256);
  EXPECT_DOUBLE_EQ(d.focal_px, std::hypot(1920.0, 1080.0));
  EXPECT_EQ(d.source, IntrinsicSource::DiagonalHeuristic);
  EXPECT_DOUBLE_EQ(CameraIntrinsics::dummy(1920, 1080, 256).focal_px, 5000.0);
  EXPECT_DOUBLE_EQ(intrinsics(1000, 256).ndc_focal(), 2000.0 / 256.0);
  expect_error([] { CameraIntrinsics::exact(-1.0, 10, 10, 10); }, ErrorKind::InvalidArgument);
}

TEST(DepthProperty, DummyFocalScalesDepthExactly) {
  const CameraIntrinsics k = intrinsics(1000, 256);
  const CameraIntrinsics dummy = CameraIntrinsics::dummy(1920, 1080, 256);
  const SyntheticScene scene = facing_scene(Vec3(0.1, 0.0, 4.0), 3, k);
  for (const auto& o : simulate_ehps(scene, 0.0, 0)) {
    EXPECT_NEAR(recover_root_depth(o, dummy) / recover_root_depth(o, k), 5.0, 1e-12);
  }
}

TEST(HumanRootTransform, ExampleAndInverseIdentity) {
  const RigidTransform t = human_root_transform_camera(obs_with(1.0), intrinsics(112, 224));
  EXPECT_LE(max_abs_difference(t, {Rotation3::identity(), {0, 0, 1}}), 0.0);
  Gen g(23);
  for (int i = 0; i < 100; ++i) {
    WeakPerspectiveObservation o = obs_with(g.uniform(0.5, 5.0), g.uniform(-1, 1), g.uniform(-1, 1));
    o.global_orientation = g.rotation();
    const RigidTransform ch = human_root_transform_camera(o, intrinsics(1000, 256));
    const RigidTransform hc = inverse(ch);
    EXPECT_VEC_NEAR(hc.translation, Vec3(-(ch.rotation.inverse() * ch.translation)), 1e-12);
  }
}

}  // namespace
}  // namespace wt_test
