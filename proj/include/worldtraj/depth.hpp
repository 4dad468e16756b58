#pragma once

#include <string_view>

#include "worldtraj/geometry.hpp"
#include "worldtraj/skeleton.hpp"

namespace worldtraj {

enum class IntrinsicSource { Exact, DiagonalHeuristic, Dummy };

std::string_view to_string(IntrinsicSource source);
IntrinsicSource intrinsic_source_from_string(std::string_view name);

/// Focal length commonly assumed by camera-frame body estimators.
inline constexpr double kDummyFocalPx = 5000.0;

struct CameraIntrinsics {
  double focal_px = kDummyFocalPx;  ///< f, pixels
  int crop_resolution = 256;        ///< I, side of the square estimator crop
  int image_width = 1920;
  int image_height = 1080;
  IntrinsicSource source = IntrinsicSource::Exact;

  static CameraIntrinsics exact(double focal_px, int width, int height, int crop_resolution);
  /// f = image diagonal in pixels.
  static CameraIntrinsics diagonal_heuristic(int width, int height, int crop_resolution);
  static CameraIntrinsics dummy(int width, int height, int crop_resolution);

  /// Throws InvalidArgument when any field is out of range or the
  /// diagonal-heuristic focal disagrees with the image size.
  void validate() const;

  /// Focal length in NDC units, 2f/I.
  double ndc_focal() const { return 2.0 * focal_px / crop_resolution; }
  double aspect() const { return static_cast<double>(image_width) / image_height; }
};

/// Per-frame output of a camera-frame body estimator under the
/// weak-perspective model.
struct WeakPerspectiveObservation {
  double scale = 1.0;  ///< s, NDC scale
  double t_x = 0.0;    ///< camera-frame root x, meters
  double t_y = 0.0;    ///< camera-frame root y, meters
  Rotation3 global_orientation;
  JointFrame joints_camera{};  ///< root-relative offsets, meters (pelvis ~ 0)
};

/// t_z = (2 / I) * (f / s). Throws NonPositiveScale when s <= 0.
double recover_root_depth(const WeakPerspectiveObservation& obs, const CameraIntrinsics& cam);

/// (t_x, t_y, t_z) with t_z from recover_root_depth.
Vec3 root_translation_camera(const WeakPerspectiveObservation& obs, const CameraIntrinsics& cam);

/// (s (t_x + dx), s (t_y + dy)) in NDC.
Vec2 project_weak_perspective(const Vec3& point_offset, const WeakPerspectiveObservation& obs);

}  // namespace worldtraj
