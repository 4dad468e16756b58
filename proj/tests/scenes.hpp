#pragma once

#include <vector>

#include "worldtraj/simulator.hpp"

namespace wt_test {

using namespace worldtraj;

/// Camera-from-body rotation for an upright subject facing the camera
/// (body x forward, z up; camera x right, y down, z forward).
inline Rotation3 facing_camera_rotation() {
  Mat3 m;
  m << 0, 1, 0,  //
      0, 0, -1,  //
      -1, 0, 0;
  return Rotation3(m);
}

/// Static camera placed so the idle subject's pelvis sits at `root_in_camera`
/// and faces the camera on every frame.
inline SyntheticScene facing_scene(const Vec3& root_in_camera, std::size_t frames, const CameraIntrinsics& k,
                                   std::uint64_t seed = 0) {
  const GeneratedMotion m = generate_motion(MotionKind::Idle, {}, frames, seed);
  const RigidTransform human_in_camera{facing_camera_rotation(), root_in_camera};
  const RigidTransform cam = compose(m.root[0], inverse(human_in_camera));
  Trajectory camera;
  camera.frame_rate = m.root.frame_rate;
  camera.poses.assign(frames, cam);
  return assemble_scene(m, camera, k, seed);
}

/// Scene used by the closed-loop checks: straight walk followed by a
/// tracking shot.
inline SceneConfig walk_tracking_config(std::uint64_t seed, std::size_t frames = 300) {
  SceneConfig cfg;
  cfg.motion = MotionKind::StraightWalk;
  cfg.frames = frames;
  cfg.plan = CameraPlan::Single;
  cfg.shot = default_scene_shot();
  cfg.seed = seed;
  return cfg;
}

}  // namespace wt_test
