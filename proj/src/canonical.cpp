#include "worldtraj/canonical.hpp"

#include "worldtraj/errors.hpp"

namespace worldtraj {

RigidTransform CanonicalTransformSequence::frame_transform(std::size_t i) const {
  return {shared_rotation, shared_rotation * per_frame_translation.at(i)};
}

JointSequence joints_to_world(const JointSequence& joints_camera, const Trajectory& vo) {
  if (joints_camera.coordinate_frame() != CoordinateFrame::Camera) {
    fail(ErrorKind::WrongFrame, "joints_to_world expects camera-frame joints");
  }
  if (joints_camera.size() != vo.size()) {
    fail(ErrorKind::LengthMismatch, "joints and VO trajectory lengths differ");
  }
  if (!first_pose_is_identity(vo)) {
    fail(ErrorKind::NonIdentityFirstFrame, "VO trajectory must start at identity");
  }
  std::vector<JointFrame> out(joints_camera.size());
  for (std::size_t i = 0; i < joints_camera.size(); ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      out[i][j] = apply_to_point(vo[i], joints_camera[i][j]);
    }
  }
  return JointSequence(std::move(out), CoordinateFrame::World, joints_camera.frame_rate());
}

CanonicalTransformSequence canonical_transform(const JointSequence& joints_world,
                                               const Rotation3& global_orientation_frame0) {
  if (joints_world.coordinate_frame() != CoordinateFrame::World) {
    fail(ErrorKind::WrongFrame, "canonical_transform expects world-frame joints");
  }
  CanonicalTransformSequence tf;
  // World frame is camera frame 0, so the frame-0 camera rotation is identity.
  tf.shared_rotation = global_orientation_frame0.inverse();
  tf.per_frame_translation.reserve(joints_world.size());
  for (std::size_t i = 0; i < joints_world.size(); ++i) {
    tf.per_frame_translation.push_back(-joints_world.root(i));
  }
  return tf;
}

JointSequence canonicalize_joints(const JointSequence& joints_world,
                                  const CanonicalTransformSequence& tf) {
  if (joints_world.coordinate_frame() != CoordinateFrame::World) {
    fail(ErrorKind::WrongFrame, "canonicalize_joints expects world-frame joints");
  }
  if (joints_world.size() != tf.size()) {
    fail(ErrorKind::LengthMismatch, "joint sequence and canonical transforms differ in length");
  }
  std::vector<JointFrame> out(joints_world.size());
  for (std::size_t i = 0; i < joints_world.size(); ++i) {
    const Vec3 root = joints_world.root(i);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      out[i][j] = tf.shared_rotation * (joints_world[i][j] - root);
    }
    out[i][idx(Joint::Pelvis)] = Vec3::Zero();
  }
  return JointSequence(std::move(out), CoordinateFrame::Canonical, joints_world.frame_rate());
}

VelocitySequence decanonicalize_velocity(const VelocitySequence& v,
                                         const CanonicalTransformSequence& tf) {
  if (v.coordinate_frame != CoordinateFrame::Canonical) {
    fail(ErrorKind::WrongFrame, "decanonicalize_velocity expects canonical velocities");
  }
  return rotate_velocities(v, tf.shared_rotation.inverse(), CoordinateFrame::World);
}

std::vector<Vec3> integrate_velocities(const VelocitySequence& v, const Vec3& initial_root) {
  std::vector<Vec3> out;
  out.reserve(v.size() + 1);
  out.push_back(initial_root);
  Vec3 p = initial_root;
  for (const auto& step : v.velocities) {
    p += step;
    out.push_back(p);
  }
  return out;
}

VelocitySequence difference_positions(const std::vector<Vec3>& positions, CoordinateFrame frame) {
  VelocitySequence v;
  v.coordinate_frame = frame;
  if (positions.size() < 2) return v;
  v.velocities.reserve(positions.size() - 1);
  for (std::size_t i = 1; i < positions.size(); ++i) v.velocities.push_back(positions[i] - positions[i - 1]);
  return v;
}

VelocitySequence rotate_velocities(const VelocitySequence& v, const Rotation3& r,
                                   CoordinateFrame frame) {
  VelocitySequence out;
  out.coordinate_frame = frame;
  out.velocities.reserve(v.size());
  for (const auto& step : v.velocities) out.velocities.push_back(r * step);
  return out;
}

}  // namespace worldtraj
