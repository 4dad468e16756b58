#include "worldtraj/trajectory.hpp"

#include <string>

#include "worldtraj/errors.hpp"

namespace worldtraj {

std::string_view to_string(ScaleStatus status) {
  return status == ScaleStatus::Metric ? "metric" : "scaleless";
}

ScaleStatus scale_status_from_string(std::string_view name) {
  if (name == "metric") return ScaleStatus::Metric;
  if (name == "scaleless") return ScaleStatus::Scaleless;
  fail(ErrorKind::InvalidArgument, "unknown scale status '" + std::string(name) + "'");
}

std::vector<Vec3> Trajectory::positions() const {
  std::vector<Vec3> out;
  out.reserve(poses.size());
  for (const auto& p : poses) out.push_back(p.translation);
  return out;
}

std::vector<Rotation3> Trajectory::rotations() const {
  std::vector<Rotation3> out;
  out.reserve(poses.size());
  for (const auto& p : poses) out.push_back(p.rotation);
  return out;
}

bool first_pose_is_identity(const Trajectory& traj, double tolerance) {
  if (traj.empty()) return false;
  return max_abs_difference(traj.poses.front(), RigidTransform::identity()) <= tolerance;
}

Trajectory normalize_to_first(const Trajectory& traj) {
  Trajectory out = traj;
  if (traj.empty()) return out;
  const RigidTransform first_inv = inverse(traj.poses.front());
  for (auto& p : out.poses) p = compose(first_inv, p);
  out.poses.front() = RigidTransform::identity();
  return out;
}

}  // namespace worldtraj
