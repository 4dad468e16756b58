#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "worldtraj/canonical.hpp"
#include "worldtraj/depth.hpp"
#include "worldtraj/geometry.hpp"
#include "worldtraj/trajectory.hpp"
#include "worldtraj/velocimeter.hpp"

namespace worldtraj {

/// [global_orientation | (t_x, t_y, t_z)], the root pose in the camera frame.
RigidTransform human_root_transform_camera(const WeakPerspectiveObservation& obs,
                                          const CameraIntrinsics& cam);

/// T^w_c = T^w_h * (T^c_h)^-1 per frame.
Trajectory derive_camera_from_human(const Trajectory& human,
                                    const std::vector<RigidTransform>& human_in_camera);

struct CameraAlignment {
  Trajectory final_camera;
  SimilarityTransform alignment;
  double residual_rms = 0.0;  ///< meters, after alignment
};

/// Similarity-aligns VO positions onto the human-derived camera positions.
/// Final rotations are the VO rotations, untouched; derived rotations are
/// ignored. Throws DegenerateConfiguration when the VO positions cannot
/// anchor a similarity (e.g. a static camera).
CameraAlignment align_camera_trajectory(const Trajectory& vo, const Trajectory& derived);

/// T^w_h = T^w_c * T^c_h per frame.
Trajectory derive_human_from_camera(const Trajectory& camera,
                                    const std::vector<RigidTransform>& human_in_camera);

enum class PipelineMode {
  Fused,   ///< velocimeter scale transferred to VO via alignment
  VoOnly,  ///< humans placed with the unscaled VO cameras
  MvOnly,  ///< velocimeter-integrated human, camera derived from it
};

std::string_view to_string(PipelineMode mode);
PipelineMode pipeline_mode_from_string(std::string_view name);

struct PipelineOptions {
  PipelineMode mode = PipelineMode::Fused;
  /// 0 aligns the whole sequence at once; N > 0 aligns consecutive N-frame
  /// windows independently (a trailing window shorter than 3 frames is merged
  /// into its predecessor).
  std::size_t alignment_window = 0;
};

struct PipelineInput {
  std::vector<WeakPerspectiveObservation> observations;
  CameraIntrinsics intrinsics;
  Trajectory vo;  ///< scaleless, first pose identity
  const VelocityEstimator* velocimeter = nullptr;
  double frame_rate = 30.0;

  /// Throws InvalidArgument / LengthMismatch when the invariants fail.
  void validate() const;
};

enum class PipelineStatus {
  Ok,
  /// Alignment was impossible; `human` and `camera` hold the velocimeter-only
  /// fallback.
  DegenerateAlignment,
};

struct WindowAlignment {
  std::size_t first_frame = 0;
  std::size_t frame_count = 0;
  SimilarityTransform alignment;
};

struct PipelineDiagnostics {
  std::optional<SimilarityTransform> alignment;
  double alignment_residual_rms = 0.0;
  std::vector<WindowAlignment> alignment_windows;
  std::vector<double> root_depths;  ///< recovered t_z per frame, meters
  Trajectory mv_human;              ///< velocimeter-integrated human (always filled)
  std::vector<std::pair<std::string, double>> stage_seconds;
  bool fallback_mv_only = false;
  std::string warning;
  std::string velocimeter;
  PipelineMode mode = PipelineMode::Fused;
};

struct PipelineResult {
  Trajectory human;
  Trajectory camera;
  PipelineStatus status = PipelineStatus::Ok;
  PipelineDiagnostics diagnostics;
  std::vector<RigidTransform> human_in_camera;  ///< T^c_h per frame
};

/// Stage order: depth recovery, world lifting, canonicalization, velocity
/// estimation, de-canonicalization, integration, camera derivation,
/// alignment, human re-derivation. Errors other than a degenerate alignment
/// propagate as Error with the failing stage name attached.
PipelineResult run_pipeline(const PipelineInput& input, const PipelineOptions& options = {});

/// World-frame joints implied by a pipeline result: camera-frame joints
/// (recovered root plus offsets) lifted by the final camera poses.
JointSequence world_joints_from_result(const PipelineInput& input, const PipelineResult& result);

/// Camera-frame joints implied by the observations (root plus offsets).
JointSequence camera_joints_from_observations(const std::vector<WeakPerspectiveObservation>& observations,
                                              const CameraIntrinsics& intrinsics, double frame_rate);

}  // namespace worldtraj
