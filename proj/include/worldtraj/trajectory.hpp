#pragma once

#include <string_view>
#include <vector>

#include "worldtraj/geometry.hpp"

namespace worldtraj {

enum class ScaleStatus { Metric, Scaleless };

std::string_view to_string(ScaleStatus status);
ScaleStatus scale_status_from_string(std::string_view name);

/// Time-indexed poses of a camera (camera-to-world) or a human root
/// (root-to-world).
struct Trajectory {
  std::vector<RigidTransform> poses;
  ScaleStatus scale_status = ScaleStatus::Metric;
  double frame_rate = 30.0;

  std::size_t size() const { return poses.size(); }
  bool empty() const { return poses.empty(); }
  const RigidTransform& operator[](std::size_t i) const { return poses[i]; }

  std::vector<Vec3> positions() const;
  std::vector<Rotation3> rotations() const;
};

/// First-pose tolerance used to decide whether a VO track is anchored at the
/// world origin.
inline constexpr double kIdentityFirstFrameTolerance = 1e-6;

bool first_pose_is_identity(const Trajectory& traj,
                            double tolerance = kIdentityFirstFrameTolerance);

/// Re-expresses every pose relative to pose 0 so the first pose is identity.
Trajectory normalize_to_first(const Trajectory& traj);

}  // namespace worldtraj
