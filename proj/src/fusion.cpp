#include "worldtraj/fusion.hpp"

#include <chrono>
#include <string>

#include "worldtraj/errors.hpp"

namespace worldtraj {

RigidTransform human_root_transform_camera(const WeakPerspectiveObservation& obs,
                                          const CameraIntrinsics& cam) {
  return {obs.global_orientation, root_translation_camera(obs, cam)};
}

Trajectory derive_camera_from_human(const Trajectory& human,
                                    const std::vector<RigidTransform>& human_in_camera) {
  if (human.size() != human_in_camera.size()) {
    fail(ErrorKind::LengthMismatch, "human trajectory and camera-frame root poses differ in length");
  }
  Trajectory out;
  out.scale_status = ScaleStatus::Metric;
  out.frame_rate = human.frame_rate;
  out.poses.reserve(human.size());
  for (std::size_t i = 0; i < human.size(); ++i) {
    out.poses.push_back(compose(human[i], inverse(human_in_camera[i])));
  }
  return out;
}

CameraAlignment align_camera_trajectory(const Trajectory& vo, const Trajectory& derived) {
  if (vo.size() != derived.size()) fail(ErrorKind::LengthMismatch, "VO and derived cameras differ in length");
  const std::vector<Vec3> source = vo.positions();
  const std::vector<Vec3> target = derived.positions();
  CameraAlignment out;
  out.alignment = umeyama_align(source, target, /*with_scale=*/true);
  out.residual_rms = alignment_rms(out.alignment, source, target);
  out.final_camera.scale_status = ScaleStatus::Metric;
  out.final_camera.frame_rate = vo.frame_rate;
  out.final_camera.poses.reserve(vo.size());
  for (std::size_t i = 0; i < vo.size(); ++i) {
    out.final_camera.poses.push_back({vo[i].rotation, out.alignment.apply(vo[i].translation)});
  }
  return out;
}

Trajectory derive_human_from_camera(const Trajectory& camera,
                                    const std::vector<RigidTransform>& human_in_camera) {
  if (camera.size() != human_in_camera.size()) {
    fail(ErrorKind::LengthMismatch, "camera trajectory and camera-frame root poses differ in length");
  }
  Trajectory out;
  out.scale_status = camera.scale_status;
  out.frame_rate = camera.frame_rate;
  out.poses.reserve(camera.size());
  for (std::size_t i = 0; i < camera.size(); ++i) out.poses.push_back(compose(camera[i], human_in_camera[i]));
  return out;
}

std::string_view to_string(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::Fused: return "fused";
    case PipelineMode::VoOnly: return "vo-only";
    case PipelineMode::MvOnly: return "mv-only";
  }
  return "unknown";
}

PipelineMode pipeline_mode_from_string(std::string_view name) {
  if (name == "fused") return PipelineMode::Fused;
  if (name == "vo-only") return PipelineMode::VoOnly;
  if (name == "mv-only") return PipelineMode::MvOnly;
  fail(ErrorKind::InvalidArgument, "unknown pipeline mode '" + std::string(name) + "'");
}

void PipelineInput::validate() const {
  const std::size_t k = observations.size();
  if (k < 3) fail(ErrorKind::InvalidArgument, "pipeline needs at least 3 frames");
  if (vo.size() != k) fail(ErrorKind::LengthMismatch, "VO length differs from observation count");
  if (velocimeter == nullptr) fail(ErrorKind::InvalidArgument, "pipeline needs a velocimeter");
  intrinsics.validate();
}

JointSequence camera_joints_from_observations(const std::vector<WeakPerspectiveObservation>& observations,
                                              const CameraIntrinsics& intrinsics, double frame_rate) {
  std::vector<JointFrame> frames(observations.size());
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const Vec3 root = root_translation_camera(observations[i], intrinsics);
    for (std::size_t j = 0; j < kNumJoints; ++j) frames[i][j] = root + observations[i].joints_camera[j];
  }
  return JointSequence(std::move(frames), CoordinateFrame::Camera, frame_rate);
}

namespace {

class StageRunner {
 public:
  explicit StageRunner(PipelineDiagnostics& diag) : diag_(diag) {}

  template <typename F>
  auto operator()(const char* stage, F&& f) -> decltype(f()) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(f())>) {
        f();
        record(stage, t0);
      } else {
        auto r = f();
        record(stage, t0);
        return r;
      }
    } catch (const Error& e) {
      throw e.with_stage(stage);
    }
  }

 private:
  void record(const char* stage, std::chrono::steady_clock::time_point t0) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    diag_.stage_seconds.emplace_back(stage, dt.count());
  }
  PipelineDiagnostics& diag_;
};

}  // namespace

PipelineResult run_pipeline(const PipelineInput& input, const PipelineOptions& options) {
  PipelineResult result;
  PipelineDiagnostics& diag = result.diagnostics;
  diag.mode = options.mode;
  StageRunner stage(diag);

  stage("validate", [&] { input.validate(); });
  if (!first_pose_is_identity(input.vo)) {
    throw Error(ErrorKind::NonIdentityFirstFrame, "VO trajectory must start at identity", "validate");
  }
  diag.velocimeter = input.velocimeter->name();
  const std::size_t k = input.observations.size();
  const double fps = input.frame_rate;

  // Camera-frame root poses from weak-perspective depth.
  stage("root_translation_camera", [&] {
    result.human_in_camera.reserve(k);
    diag.root_depths.reserve(k);
    for (const auto& obs : input.observations) {
      result.human_in_camera.push_back(human_root_transform_camera(obs, input.intrinsics));
      diag.root_depths.push_back(result.human_in_camera.back().translation.z());
    }
  });
  const auto& hc = result.human_in_camera;

  const JointSequence joints_world = stage("joints_to_world", [&] {
    return joints_to_world(camera_joints_from_observations(input.observations, input.intrinsics, fps),
                           input.vo);
  });

  const CanonicalTransformSequence cano = stage("canonical_transform", [&] {
    return canonical_transform(joints_world, input.observations.front().global_orientation);
  });
  const JointSequence joints_cano = stage("canonicalize_joints", [&] { return canonicalize_joints(joints_world, cano); });

  const VelocityEstimate v_cano = stage("estimate_velocities", [&] {
    return estimate_velocities(*input.velocimeter, joints_cano);
  });
  const VelocitySequence v_world = stage("decanonicalize_velocity", [&] {
    return decanonicalize_velocity(v_cano.velocities, cano);
  });

  // Human world pose: integrated root, rotation = VO rotation * global orientation.
  stage("integrate_velocities", [&] {
    const std::vector<Vec3> roots = integrate_velocities(v_world, joints_world.root(0));
    diag.mv_human.scale_status = ScaleStatus::Metric;
    diag.mv_human.frame_rate = fps;
    diag.mv_human.poses.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      diag.mv_human.poses.push_back({input.vo[i].rotation * input.observations[i].global_orientation, roots[i]});
    }
  });

  const Trajectory derived = stage("derive_camera_from_human", [&] {
    return derive_camera_from_human(diag.mv_human, hc);
  });

  if (options.mode == PipelineMode::VoOnly) {
    result.camera = input.vo;
    result.human = stage("derive_human_from_camera", [&] { return derive_human_from_camera(input.vo, hc); });
    return result;
  }
  if (options.mode == PipelineMode::MvOnly) {
    result.camera = derived;
    result.human = diag.mv_human;
    return result;
  }

  try {
    stage("align_camera_trajectory", [&] {
      const CameraAlignment whole = align_camera_trajectory(input.vo, derived);
      diag.alignment = whole.alignment;
      diag.alignment_residual_rms = whole.residual_rms;
      if (options.alignment_window == 0 || options.alignment_window >= k) {
        result.camera = whole.final_camera;
        return;
      }
      result.camera = whole.final_camera;
      const std::size_t w = std::max<std::size_t>(3, options.alignment_window);
      for (std::size_t a = 0; a < k;) {
        std::size_t b = std::min(k, a + w);
        if (k - b < 3) b = k;
        Trajectory vo_win, der_win;
        vo_win.poses.assign(input.vo.poses.begin() + static_cast<std::ptrdiff_t>(a),
                            input.vo.poses.begin() + static_cast<std::ptrdiff_t>(b));
        der_win.poses.assign(derived.poses.begin() + static_cast<std::ptrdiff_t>(a),
                             derived.poses.begin() + static_cast<std::ptrdiff_t>(b));
        const CameraAlignment part = align_camera_trajectory(vo_win, der_win);
        diag.alignment_windows.push_back({a, b - a, part.alignment});
        for (std::size_t i = a; i < b; ++i) result.camera.poses[i] = part.final_camera.poses[i - a];
        a = b;
      }
    });
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateConfiguration) throw;
    result.status = PipelineStatus::DegenerateAlignment;
    diag.fallback_mv_only = true;
    diag.warning = e.what();
    result.camera = derived;
    result.human = diag.mv_human;
    return result;
  }

  result.human = stage("derive_human_from_camera", [&] { return derive_human_from_camera(result.camera, hc); });
  return result;
}

JointSequence world_joints_from_result(const PipelineInput& input, const PipelineResult& result) {
  const JointSequence cam = camera_joints_from_observations(input.observations, input.intrinsics, input.frame_rate);
  if (result.camera.size() != cam.size()) fail(ErrorKind::LengthMismatch, "result and observations differ in length");
  std::vector<JointFrame> frames(cam.size());
  for (std::size_t i = 0; i < cam.size(); ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) frames[i][j] = apply_to_point(result.camera[i], cam[i][j]);
  }
  return JointSequence(std::move(frames), CoordinateFrame::World, input.frame_rate);
}

}  // namespace worldtraj
