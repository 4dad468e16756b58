#include "worldtraj/depth.hpp"

#include <cmath>
#include <string>

#include "worldtraj/errors.hpp"

namespace worldtraj {

std::string_view to_string(IntrinsicSource source) {
  switch (source) {
    case IntrinsicSource::Exact: return "exact";
    case IntrinsicSource::DiagonalHeuristic: return "diagonal-heuristic";
    case IntrinsicSource::Dummy: return "dummy";
  }
  return "unknown";
}

IntrinsicSource intrinsic_source_from_string(std::string_view name) {
  if (name == "exact") return IntrinsicSource::Exact;
  if (name == "diagonal-heuristic") return IntrinsicSource::DiagonalHeuristic;
  if (name == "dummy") return IntrinsicSource::Dummy;
  fail(ErrorKind::InvalidArgument, "unknown intrinsic source '" + std::string(name) + "'");
}

CameraIntrinsics CameraIntrinsics::exact(double focal_px, int width, int height,
                                         int crop_resolution) {
  CameraIntrinsics c{focal_px, crop_resolution, width, height, IntrinsicSource::Exact};
  c.validate();
  return c;
}

CameraIntrinsics CameraIntrinsics::diagonal_heuristic(int width, int height, int crop_resolution) {
  const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
  CameraIntrinsics c{diag, crop_resolution, width, height, IntrinsicSource::DiagonalHeuristic};
  c.validate();
  return c;
}

CameraIntrinsics CameraIntrinsics::dummy(int width, int height, int crop_resolution) {
  CameraIntrinsics c{kDummyFocalPx, crop_resolution, width, height, IntrinsicSource::Dummy};
  c.validate();
  return c;
}

void CameraIntrinsics::validate() const {
  if (!(focal_px > 0.0) || !std::isfinite(focal_px)) {
    fail(ErrorKind::InvalidArgument, "focal length must be positive");
  }
  if (crop_resolution <= 0) fail(ErrorKind::InvalidArgument, "crop resolution must be positive");
  if (image_width <= 0 || image_height <= 0) {
    fail(ErrorKind::InvalidArgument, "image size must be positive");
  }
  if (source == IntrinsicSource::DiagonalHeuristic) {
    const double diag = std::hypot(static_cast<double>(image_width), static_cast<double>(image_height));
    if (std::abs(focal_px - diag) > 1e-9 * diag) {
      fail(ErrorKind::InvalidArgument, "diagonal-heuristic focal must equal the image diagonal");
    }
  }
}

double recover_root_depth(const WeakPerspectiveObservation& obs, const CameraIntrinsics& cam) {
  if (!(obs.scale > 0.0)) fail(ErrorKind::NonPositiveScale, "weak-perspective scale must be > 0");
  return (2.0 / cam.crop_resolution) * (cam.focal_px / obs.scale);
}

Vec3 root_translation_camera(const WeakPerspectiveObservation& obs, const CameraIntrinsics& cam) {
  return {obs.t_x, obs.t_y, recover_root_depth(obs, cam)};
}

Vec2 project_weak_perspective(const Vec3& point_offset, const WeakPerspectiveObservation& obs) {
  return {obs.scale * (obs.t_x + point_offset.x()), obs.scale * (obs.t_y + point_offset.y())};
}

}  // namespace worldtraj
