#pragma once

#include <vector>

#include "worldtraj/geometry.hpp"
#include "worldtraj/skeleton.hpp"
#include "worldtraj/trajectory.hpp"

namespace worldtraj {

/// World-to-canonical transforms: one rotation shared by the whole sequence
/// (inverse of the frame-0 global orientation in the world frame) and a
/// per-frame translation that moves that frame's pelvis to the origin.
struct CanonicalTransformSequence {
  Rotation3 shared_rotation;
  std::vector<Vec3> per_frame_translation;  ///< -p^w_i

  std::size_t size() const { return per_frame_translation.size(); }
  /// Full transform for frame i: x -> R (x + t_i).
  RigidTransform frame_transform(std::size_t i) const;
};

/// Per-frame root displacement, v_i = p_i - p_{i-1} for i = 1..K-1.
struct VelocitySequence {
  std::vector<Vec3> velocities;  ///< meters per frame
  CoordinateFrame coordinate_frame = CoordinateFrame::Canonical;

  std::size_t size() const { return velocities.size(); }
  bool empty() const { return velocities.empty(); }
};

/// Lifts camera-frame joints with camera-to-world poses. The VO track must
/// start at identity (world = first camera frame).
JointSequence joints_to_world(const JointSequence& joints_camera, const Trajectory& vo);

CanonicalTransformSequence canonical_transform(const JointSequence& joints_world,
                                               const Rotation3& global_orientation_frame0);

JointSequence canonicalize_joints(const JointSequence& joints_world,
                                  const CanonicalTransformSequence& tf);

/// Rotation-only: the per-frame translations of the inverse transform cancel
/// for displacement vectors.
VelocitySequence decanonicalize_velocity(const VelocitySequence& v,
                                         const CanonicalTransformSequence& tf);

/// p_0 = initial_root, p_i = p_0 + sum_{j<=i} v_j.
std::vector<Vec3> integrate_velocities(const VelocitySequence& v, const Vec3& initial_root);

/// Finite differences of a position track, the inverse of integrate_velocities.
VelocitySequence difference_positions(const std::vector<Vec3>& positions,
                                      CoordinateFrame frame = CoordinateFrame::World);

/// Rotates each displacement by `r`.
VelocitySequence rotate_velocities(const VelocitySequence& v, const Rotation3& r,
                                   CoordinateFrame frame);

}  // namespace worldtraj
