#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "worldtraj/geometry.hpp"

namespace worldtraj {

inline constexpr std::size_t kNumJoints = 15;

/// Pelvis (the root) followed by the 14 LSP joints.
enum class Joint : std::size_t {
  Pelvis = 0,
  RightAnkle,
  RightKnee,
  RightHip,
  LeftHip,
  LeftKnee,
  LeftAnkle,
  RightWrist,
  RightElbow,
  RightShoulder,
  LeftShoulder,
  LeftElbow,
  LeftWrist,
  Neck,
  HeadTop,
};

inline constexpr std::array<std::string_view, kNumJoints> kJointNames = {
    "pelvis",     "r_ankle",    "r_knee",  "r_hip",    "l_hip",
    "l_knee",     "l_ankle",    "r_wrist", "r_elbow",  "r_shoulder",
    "l_shoulder", "l_elbow",    "l_wrist", "neck",     "head_top",
};

constexpr std::size_t idx(Joint j) { return static_cast<std::size_t>(j); }

using JointFrame = std::array<Vec3, kNumJoints>;

enum class CoordinateFrame { Camera, World, Canonical };

std::string_view to_string(CoordinateFrame frame);
CoordinateFrame coordinate_frame_from_string(std::string_view name);

/// K frames of the 15-joint skeleton in a declared coordinate frame.
class JointSequence {
 public:
  static constexpr double kDefaultFrameRate = 30.0;

  JointSequence() = default;
  /// Throws InvalidArgument when empty, non-finite, or frame_rate <= 0.
  JointSequence(std::vector<JointFrame> frames, CoordinateFrame frame,
                double frame_rate = kDefaultFrameRate);

  std::size_t size() const { return frames_.size(); }
  bool empty() const { return frames_.empty(); }
  const JointFrame& operator[](std::size_t i) const { return frames_[i]; }
  const std::vector<JointFrame>& frames() const { return frames_; }
  CoordinateFrame coordinate_frame() const { return frame_; }
  double frame_rate() const { return frame_rate_; }

  Vec3 root(std::size_t i) const { return frames_[i][idx(Joint::Pelvis)]; }
  std::vector<Vec3> roots() const;

 private:
  std::vector<JointFrame> frames_;
  CoordinateFrame frame_ = CoordinateFrame::World;
  double frame_rate_ = kDefaultFrameRate;
};

}  // namespace worldtraj
