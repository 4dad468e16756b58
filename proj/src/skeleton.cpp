#include "worldtraj/skeleton.hpp"

#include <string>

#include "worldtraj/errors.hpp"

namespace worldtraj {

std::string_view to_string(CoordinateFrame frame) {
  switch (frame) {
    case CoordinateFrame::Camera: return "camera";
    case CoordinateFrame::World: return "world";
    case CoordinateFrame::Canonical: return "canonical";
  }
  return "unknown";
}

CoordinateFrame coordinate_frame_from_string(std::string_view name) {
  if (name == "camera") return CoordinateFrame::Camera;
  if (name == "world") return CoordinateFrame::World;
  if (name == "canonical") return CoordinateFrame::Canonical;
  fail(ErrorKind::InvalidArgument, "unknown coordinate frame '" + std::string(name) + "'");
}

JointSequence::JointSequence(std::vector<JointFrame> frames, CoordinateFrame frame,
                             double frame_rate)
    : frames_(std::move(frames)), frame_(frame), frame_rate_(frame_rate) {
  if (frames_.empty()) fail(ErrorKind::InvalidArgument, "joint sequence needs at least one frame");
  if (!(frame_rate_ > 0.0)) fail(ErrorKind::InvalidArgument, "frame rate must be positive");
  for (const auto& f : frames_) {
    for (const auto& j : f) {
      if (!j.allFinite()) fail(ErrorKind::InvalidArgument, "joint sequence contains non-finite values");
    }
  }
}

std::vector<Vec3> JointSequence::roots() const {
  std::vector<Vec3> out;
  out.reserve(frames_.size());
  for (const auto& f : frames_) out.push_back(f[idx(Joint::Pelvis)]);
  return out;
}

}  // namespace worldtraj
