#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "worldtraj/geometry.hpp"
#include "worldtraj/skeleton.hpp"
#include "worldtraj/trajectory.hpp"

namespace worldtraj {

inline constexpr std::size_t kDefaultSegmentLength = 100;

struct Segment {
  std::size_t first = 0;
  std::size_t count = 0;
  bool partial = false;  ///< trailing segment shorter than the nominal length
};

/// Consecutive non-overlapping segments; a trailing remainder of at least
/// two frames is kept and flagged partial. Throws TooShort below 2 frames.
std::vector<Segment> segment_sequence(std::size_t length, std::size_t segment_length = kDefaultSegmentLength);

struct SegmentError {
  Segment segment;
  double w_mpjpe = 0.0;   ///< mm, similarity fitted on the first two frames
  double wa_mpjpe = 0.0;  ///< mm, similarity fitted on the whole segment
};

struct WorldJointErrors {
  std::vector<SegmentError> segments;
  double w_mpjpe = 0.0;   ///< mean over segments, mm
  double wa_mpjpe = 0.0;  ///< mean over segments, mm
};

/// Both sequences in the world frame with equal shapes. Throws WrongFrame,
/// LengthMismatch, TooShort, DegenerateConfiguration.
WorldJointErrors world_joint_errors(const JointSequence& est, const JointSequence& gt,
                                    std::size_t segment_length = kDefaultSegmentLength);
double w_mpjpe_100(const JointSequence& est, const JointSequence& gt);
double wa_mpjpe_100(const JointSequence& est, const JointSequence& gt);

struct AteResult {
  double ate_mm = 0.0;
  double alignment_scale = 1.0;
  SimilarityTransform alignment;
};

/// Mean position error after similarity-aligning the estimate onto the
/// ground truth, plus the scale that alignment used.
AteResult ate(std::span<const Vec3> est, std::span<const Vec3> gt);
AteResult ate(const Trajectory& est, const Trajectory& gt);

struct CameraFrameErrors {
  double mpjpe = 0.0;     ///< mm, pelvis-aligned
  double pa_mpjpe = 0.0;  ///< mm, per-frame similarity
  double t_mpjpe = 0.0;   ///< mm, no alignment
  double accel = 0.0;     ///< m/s^2, central second differences
};

/// Equal shapes required (LengthMismatch). Accel is 0 below 3 frames.
CameraFrameErrors camera_frame_errors(const JointSequence& est, const JointSequence& gt);

/// Everything reported for one sequence. Optional parts are filled when the
/// corresponding inputs were given.
struct SegmentReport {
  std::optional<WorldJointErrors> world;
  std::optional<AteResult> human;   ///< H-ATE / H-AS
  std::optional<AteResult> camera;  ///< C-ATE / C-AS
  std::optional<CameraFrameErrors> camera_frame;
  std::size_t frames = 0;
  std::size_t segment_length = kDefaultSegmentLength;
  std::string w_alignment = "similarity-first-two-frames";
};

struct EvaluationInput {
  std::optional<Trajectory> est_human, gt_human;
  std::optional<Trajectory> est_camera, gt_camera;
  std::optional<JointSequence> est_joints_world, gt_joints_world;
  std::optional<JointSequence> est_joints_camera, gt_joints_camera;
  std::size_t segment_length = kDefaultSegmentLength;
};

SegmentReport evaluate(const EvaluationInput& input);

}  // namespace worldtraj
