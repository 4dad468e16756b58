#include "worldtraj/metrics.hpp"

#include <string>

#include "worldtraj/errors.hpp"

namespace worldtraj {

namespace {

constexpr double kMm = 1000.0;

void require_same_shape(const JointSequence& est, const JointSequence& gt) {
  if (est.size() != gt.size()) {
    fail(ErrorKind::LengthMismatch, "estimate has " + std::to_string(est.size()) + " frames, ground truth " +
                                        std::to_string(gt.size()));
  }
}

std::vector<Vec3> flatten(const JointSequence& seq, std::size_t first, std::size_t count) {
  std::vector<Vec3> out;
  out.reserve(count * kNumJoints);
  for (std::size_t i = first; i < first + count; ++i) out.insert(out.end(), seq[i].begin(), seq[i].end());
  return out;
}

double mean_error_mm(const SimilarityTransform& t, std::span<const Vec3> est, std::span<const Vec3> gt) {
  double sum = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) sum += (t.apply(est[i]) - gt[i]).norm();
  return kMm * sum / static_cast<double>(est.size());
}

}  // namespace

std::vector<Segment> segment_sequence(std::size_t length, std::size_t segment_length) {
  if (segment_length < 2) fail(ErrorKind::InvalidArgument, "segment length must be at least 2");
  if (length < 2) fail(ErrorKind::TooShort, "sequence needs at least 2 frames for segmentation");
  std::vector<Segment> out;
  for (std::size_t first = 0; first < length; first += segment_length) {
    const std::size_t count = std::min(segment_length, length - first);
    if (count < 2) break;
    out.push_back({first, count, count < segment_length});
  }
  return out;
}

WorldJointErrors world_joint_errors(const JointSequence& est, const JointSequence& gt, std::size_t segment_length) {
  if (est.coordinate_frame() != CoordinateFrame::World || gt.coordinate_frame() != CoordinateFrame::World) {
    fail(ErrorKind::WrongFrame, "world-grounded errors need world-frame joints");
  }
  require_same_shape(est, gt);
  WorldJointErrors out;
  for (const Segment& seg : segment_sequence(est.size(), segment_length)) {
    const std::vector<Vec3> e = flatten(est, seg.first, seg.count);
    const std::vector<Vec3> g = flatten(gt, seg.first, seg.count);
    const std::span<const Vec3> e2(e.data(), 2 * kNumJoints);
    const std::span<const Vec3> g2(g.data(), 2 * kNumJoints);
    SegmentError se;
    se.segment = seg;
    se.w_mpjpe = mean_error_mm(umeyama_align(e2, g2, true), e, g);
    se.wa_mpjpe = mean_error_mm(umeyama_align(e, g, true), e, g);
    out.w_mpjpe += se.w_mpjpe;
    out.wa_mpjpe += se.wa_mpjpe;
    out.segments.push_back(se);
  }
  out.w_mpjpe /= static_cast<double>(out.segments.size());
  out.wa_mpjpe /= static_cast<double>(out.segments.size());
  return out;
}

double w_mpjpe_100(const JointSequence& est, const JointSequence& gt) {
  return world_joint_errors(est, gt, kDefaultSegmentLength).w_mpjpe;
}

double wa_mpjpe_100(const JointSequence& est, const JointSequence& gt) {
  return world_joint_errors(est, gt, kDefaultSegmentLength).wa_mpjpe;
}

AteResult ate(std::span<const Vec3> est, std::span<const Vec3> gt) {
  if (est.size() != gt.size()) fail(ErrorKind::LengthMismatch, "trajectories differ in length");
  if (est.size() < 3) fail(ErrorKind::TooShort, "ATE needs at least 3 poses");
  AteResult out;
  out.alignment = umeyama_align(est, gt, true);
  out.alignment_scale = out.alignment.scale;
  out.ate_mm = mean_error_mm(out.alignment, est, gt);
  return out;
}

AteResult ate(const Trajectory& est, const Trajectory& gt) {
  const std::vector<Vec3> e = est.positions();
  const std::vector<Vec3> g = gt.positions();
  return ate(e, g);
}

CameraFrameErrors camera_frame_errors(const JointSequence& est, const JointSequence& gt) {
  require_same_shape(est, gt);
  CameraFrameErrors out;
  const std::size_t k = est.size();
  const double n = static_cast<double>(k * kNumJoints);
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3 shift = gt.root(i) - est.root(i);
    const std::span<const Vec3> e(est[i].data(), kNumJoints);
    const std::span<const Vec3> g(gt[i].data(), kNumJoints);
    const SimilarityTransform pa = umeyama_align(e, g, true);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      out.t_mpjpe += (est[i][j] - gt[i][j]).norm();
      out.mpjpe += (est[i][j] + shift - gt[i][j]).norm();
      out.pa_mpjpe += (pa.apply(est[i][j]) - gt[i][j]).norm();
    }
  }
  out.t_mpjpe *= kMm / n;
  out.mpjpe *= kMm / n;
  out.pa_mpjpe *= kMm / n;
  if (k >= 3) {
    const double fps2 = est.frame_rate() * est.frame_rate();
    double sum = 0.0;
    for (std::size_t i = 1; i + 1 < k; ++i) {
      for (std::size_t j = 0; j < kNumJoints; ++j) {
        const Vec3 ae = est[i + 1][j] - 2.0 * est[i][j] + est[i - 1][j];
        const Vec3 ag = gt[i + 1][j] - 2.0 * gt[i][j] + gt[i - 1][j];
        sum += (ae - ag).norm();
      }
    }
    out.accel = fps2 * sum / static_cast<double>((k - 2) * kNumJoints);
  }
  return out;
}

SegmentReport evaluate(const EvaluationInput& in) {
  SegmentReport r;
  r.segment_length = in.segment_length;
  auto note_frames = [&](std::size_t k) { r.frames = std::max(r.frames, k); };
  if (in.est_human && in.gt_human) {
    r.human = ate(*in.est_human, *in.gt_human);
    note_frames(in.gt_human->size());
  }
  if (in.est_camera && in.gt_camera) {
    r.camera = ate(*in.est_camera, *in.gt_camera);
    note_frames(in.gt_camera->size());
  }
  if (in.est_joints_world && in.gt_joints_world) {
    r.world = world_joint_errors(*in.est_joints_world, *in.gt_joints_world, in.segment_length);
    note_frames(in.gt_joints_world->size());
  }
  if (in.est_joints_camera && in.gt_joints_camera) {
    r.camera_frame = camera_frame_errors(*in.est_joints_camera, *in.gt_joints_camera);
    note_frames(in.gt_joints_camera->size());
  }
  return r;
}

}  // namespace worldtraj
