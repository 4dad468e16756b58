#include "worldtraj/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "worldtraj/io.hpp"
#include "worldtraj/rng.hpp"

namespace worldtraj::cli {

namespace fs = std::filesystem;
using io::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Config:
    case ErrorKind::InvalidFraction:
    case ErrorKind::InvalidFov:
    case ErrorKind::EmptyRange:
    case ErrorKind::ArchitectureMismatch:
      return kExitConfig;
    case ErrorKind::Io:
    case ErrorKind::UnsupportedVersion:
    case ErrorKind::CorruptModel:
      return kExitIo;
    case ErrorKind::DegenerateConfiguration:
      return kExitDegenerate;
    case ErrorKind::EmptyCorpus:
      return kExitEmptyCorpus;
    default:
      return kExitPipeline;
  }
}

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Env {
  std::optional<fs::path> output_root;
  std::uint64_t seed = 0;

  static Env load() {
    Env e;
    if (const char* r = std::getenv("WORLDTRAJ_OUTPUT_ROOT"); r != nullptr && *r != '\0') e.output_root = r;
    if (const char* s = std::getenv("WORLDTRAJ_SEED"); s != nullptr && *s != '\0') {
      try {
        e.seed = std::stoull(s);
      } catch (const std::exception&) {
        fail(ErrorKind::Config, "WORLDTRAJ_SEED is not an unsigned integer");
      }
    }
    return e;
  }

  fs::path output(const std::string& p) const {
    fs::path path(p);
    if (path.is_relative() && output_root) return *output_root / path;
    return path;
  }
};

std::pair<double, double> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) fail(ErrorKind::Config, std::string(what) + " must look like a:b");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    fail(ErrorKind::Config, std::string(what) + " must look like a:b");
  }
}

CameraIntrinsics parse_intrinsics(const std::string& spec, const CameraIntrinsics& bundle) {
  if (spec == "exact") return bundle;
  if (spec == "diagonal-heuristic") {
    return CameraIntrinsics::diagonal_heuristic(bundle.image_width, bundle.image_height, bundle.crop_resolution);
  }
  if (spec.rfind("dummy", 0) == 0) {
    CameraIntrinsics k = CameraIntrinsics::dummy(bundle.image_width, bundle.image_height, bundle.crop_resolution);
    if (spec.size() > 5) {
      if (spec[5] != ':') fail(ErrorKind::Config, "intrinsics must be exact, diagonal-heuristic or dummy:<f>");
      try {
        k.focal_px = std::stod(spec.substr(6));
      } catch (const std::exception&) {
        fail(ErrorKind::Config, "bad dummy focal in '" + spec + "'");
      }
    }
    k.validate();
    return k;
  }
  fail(ErrorKind::Config, "intrinsics must be exact, diagonal-heuristic or dummy:<f>");
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
  std::string motion = "auto";
  std::string shot = "tracking";
  std::size_t frames = 300;
  std::optional<std::uint64_t> seed;
  std::string out;
  double speed = 0.0;
  double radius = 3.5;
  double theta_deg = 0.0;
  double phi_deg = 45.0;
  std::string phi_range;
  double dphi = 45.0;
  std::string theta_range;
  double dtheta = 10.0;
  std::string frac_range = "0.3:0.8";
  double dfrac = 0.1;
  bool random_frac = false;
  double lambda_overlap = 0.7;
  bool printed_overlap_rule = false;
  double focal = 1000.0;
  int width = 1920;
  int height = 1080;
  int crop = 256;
  double joint_noise = 0.0;
  std::string ehps_mode = "exact";
  double vo_scale = 1.0;
  double vo_sigma_t = 0.0;
  double vo_sigma_r = 0.0;
  double vo_drift = 0.0;
  bool no_view_check = false;
  int keyframe_spacing = 15;
};

void add_simulate(CLI::App& app, SimulateOptions& o) {
  app.add_option("--motion", o.motion, "idle|straight-walk|circle-walk|turn-walk|run|auto");
  app.add_option("--shot", o.shot, "arc|push|pull|tracking|pan|composed|static");
  app.add_option("--frames", o.frames);
  app.add_option("--seed", o.seed);
  app.add_option("--out", o.out, "bundle directory")->required();
  app.add_option("--speed", o.speed, "m/s, 0 picks the motion default");
  app.add_option("--radius", o.radius, "camera distance, m");
  app.add_option("--theta", o.theta_deg, "polar offset from eye level, degrees");
  app.add_option("--phi", o.phi_deg, "azimuth offset from facing, degrees");
  app.add_option("--phi-range", o.phi_range, "horizontal arc a:b, degrees");
  app.add_option("--dphi", o.dphi, "horizontal arc step, degrees");
  app.add_option("--theta-range", o.theta_range, "vertical arc a:b, degrees");
  app.add_option("--dtheta", o.dtheta, "vertical arc step, degrees");
  app.add_option("--frac-range", o.frac_range, "push/pull view fractions a:b");
  app.add_option("--dfrac", o.dfrac);
  app.add_flag("--random-frac", o.random_frac, "continuous push/pull with seeded fractions");
  app.add_option("--lambda-overlap", o.lambda_overlap);
  app.add_flag("--printed-overlap-rule", o.printed_overlap_rule, "new keyframe when overlap exceeds lambda");
  app.add_option("--keyframe-spacing", o.keyframe_spacing);
  app.add_option("--focal", o.focal, "pixels");
  app.add_option("--width", o.width);
  app.add_option("--height", o.height);
  app.add_option("--crop", o.crop, "estimator crop resolution");
  app.add_option("--joint-noise", o.joint_noise, "meters");
  app.add_option("--ehps-mode", o.ehps_mode, "exact|pinhole-fit");
  app.add_option("--vo-scale", o.vo_scale, "VO translation scale factor");
  app.add_option("--vo-sigma-t", o.vo_sigma_t, "meters");
  app.add_option("--vo-sigma-r", o.vo_sigma_r, "radians");
  app.add_option("--vo-drift", o.vo_drift, "meters per frame");
  app.add_flag("--no-view-check", o.no_view_check);
}

int cmd_simulate(const SimulateOptions& o, const Env& env, std::ostream& out) {
  SceneConfig cfg;
  cfg.seed = o.seed.value_or(env.seed);
  cfg.frames = o.frames;
  cfg.intrinsics = CameraIntrinsics::exact(o.focal, o.width, o.height, o.crop);
  cfg.check_in_view = !o.no_view_check;
  cfg.motion_params.speed = o.speed;
  const bool travelling = o.shot == "tracking" || o.shot == "pan" || o.shot == "composed";
  const std::string motion = o.motion == "auto" ? (travelling ? "straight-walk" : "idle") : o.motion;
  cfg.motion = motion_kind_from_string(motion);

  ShotSpec& spec = cfg.shot;
  spec.base = SphericalCameraState::make(o.radius, o.theta_deg * kDeg, o.phi_deg * kDeg);
  spec.keyframe_spacing = o.keyframe_spacing;
  spec.follow = {o.lambda_overlap, o.printed_overlap_rule ? OverlapRule::AboveThreshold : OverlapRule::BelowThreshold};
  cfg.policy.lambda_overlap = o.lambda_overlap;
  cfg.policy.overlap_rule = spec.follow.rule;
  cfg.policy.keyframe_spacing = o.keyframe_spacing;
  cfg.policy.base = spec.base;
  if (o.shot == "composed") {
    cfg.plan = CameraPlan::Composed;
  } else if (o.shot == "static") {
    cfg.plan = CameraPlan::Static;
  } else {
    cfg.plan = CameraPlan::Single;
    spec.kind = shot_kind_from_string(o.shot);
    if (spec.kind == ShotKind::Arc) {
      if (!o.theta_range.empty()) {
        const auto [a, b] = parse_range(o.theta_range, "--theta-range");
        spec.arc = {ArcAxis::Vertical, a * kDeg, b * kDeg, o.dtheta * kDeg};
      } else {
        const auto [a, b] = parse_range(o.phi_range.empty() ? "0:180" : o.phi_range, "--phi-range");
        spec.arc = {ArcAxis::Horizontal, a * kDeg, b * kDeg, o.dphi * kDeg};
      }
    }
    if (spec.kind == ShotKind::Push || spec.kind == ShotKind::Pull) {
      const auto [a, b] = parse_range(o.frac_range, "--frac-range");
      spec.push_pull = {a, b, o.dfrac, o.random_frac, 6};
    }
  }

  const SyntheticScene scene = generate_scene(cfg);
  const SplitRng rng(cfg.seed);
  const EhpsMode mode = o.ehps_mode == "pinhole-fit" ? EhpsMode::PinholeFit
                        : o.ehps_mode == "exact"     ? EhpsMode::Exact
                                                     : (fail(ErrorKind::Config, "--ehps-mode must be exact or pinhole-fit"), EhpsMode::Exact);
  const auto obs = simulate_ehps(scene, o.joint_noise, rng.derive("ehps"), mode);
  const VONoiseModel vo_noise{o.vo_scale, o.vo_sigma_r, o.vo_sigma_t, o.vo_drift};
  const Trajectory vo = simulate_vo(scene.gt_camera, vo_noise, rng.derive("vo"));

  json extra{{"shot", o.shot},
             {"ehps", {{"joint_noise_sigma", o.joint_noise}, {"mode", o.ehps_mode}}},
             {"vo_noise",
              {{"scale_factor", o.vo_scale},
               {"rotation_noise_sigma", o.vo_sigma_r},
               {"translation_noise_sigma", o.vo_sigma_t},
               {"drift_per_frame", o.vo_drift}}}};
  const fs::path dir = env.output(o.out);
  io::write_scene_bundle(dir, scene, obs, vo, extra);
  out << "wrote scene bundle " << dir.string() << " (" << scene.size() << " frames, "
      << scene.shots.keyframes.size() << " keyframes)\n";
  return kExitOk;
}

// ---------------------------------------------------------------- run

struct RunOptions {
  std::vector<std::string> bundles;
  std::string out;
  std::string intrinsics = "exact";
  std::string velocimeter = "oracle";
  std::string mode = "fused";
  std::size_t alignment_window = 0;
  std::string vo_file;
  std::optional<double> vo_scale;
  double vo_sigma_t = 0.0;
  double vo_sigma_r = 0.0;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

void add_run(CLI::App& app, RunOptions& o) {
  app.add_option("bundles", o.bundles, "scene bundle directories")->required();
  app.add_option("--out", o.out, "output directory")->required();
  app.add_option("--intrinsics", o.intrinsics, "exact|diagonal-heuristic|dummy:<f>");
  app.add_option("--velocimeter", o.velocimeter, "oracle or a model file");
  app.add_option("--mode", o.mode, "fused|vo-only|mv-only");
  app.add_option("--alignment-window", o.alignment_window, "frames per alignment window, 0 = whole sequence");
  auto* file = app.add_option("--vo-file", o.vo_file, "VO trajectory replacing the bundle's");
  auto* sim = app.add_option("--vo-scale", o.vo_scale, "simulate VO from ground truth with this scale");
  file->excludes(sim);
  app.add_option("--vo-sigma-t", o.vo_sigma_t, "meters, with --vo-scale");
  app.add_option("--vo-sigma-r", o.vo_sigma_r, "radians, with --vo-scale");
  app.add_option("--seed", o.seed);
  app.add_option("--jobs", o.jobs, "bundles processed in parallel")->check(CLI::PositiveNumber);
}

struct RunOutcome {
  int code = kExitOk;
  std::string message;
};

RunOutcome run_one(const RunOptions& o, const Env& env, const fs::path& bundle_dir, const fs::path& out_dir,
                   const std::shared_ptr<const VelocimeterModel>& model) {
  const io::SceneBundle b = io::read_scene_bundle(bundle_dir);
  PipelineInput in;
  in.observations = b.observations;
  in.intrinsics = parse_intrinsics(o.intrinsics, b.intrinsics);
  in.frame_rate = b.gt_human.frame_rate;
  if (!o.vo_file.empty()) {
    in.vo = io::read_traj(o.vo_file);
  } else if (o.vo_scale) {
    const VONoiseModel noise{*o.vo_scale, o.vo_sigma_r, o.vo_sigma_t, 0.0};
    in.vo = simulate_vo(b.gt_camera, noise, SplitRng(o.seed.value_or(env.seed)).derive("vo"));
  } else {
    in.vo = b.vo;
  }
  std::unique_ptr<VelocityEstimator> est;
  if (o.velocimeter == "oracle") {
    est = std::make_unique<OracleVelocimeter>(
        OracleVelocimeter::from_ground_truth(b.gt_human.positions(), b.gt_human[0].rotation));
  } else {
    est = std::make_unique<GruVelocimeter>(model);
  }
  in.velocimeter = est.get();
  PipelineOptions opts;
  opts.mode = pipeline_mode_from_string(o.mode);
  opts.alignment_window = o.alignment_window;

  const PipelineResult r = run_pipeline(in, opts);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + out_dir.string());
  io::write_traj(out_dir / "human.traj", r.human);
  io::write_traj(out_dir / "camera.traj", r.camera);
  json diag = io::diagnostics_to_json(r);
  diag["intrinsics"] = io::intrinsics_to_json(in.intrinsics);
  diag["bundle"] = bundle_dir.string();
  io::write_text(out_dir / "diagnostics.json", diag.dump(2) + "\n");

  std::ostringstream msg;
  msg << bundle_dir.string() << ": ";
  if (r.status == PipelineStatus::DegenerateAlignment) {
    msg << "warning: " << r.diagnostics.warning << "; velocimeter-only fallback written";
    return {kExitDegenerate, msg.str()};
  }
  msg << "ok";
  if (r.diagnostics.alignment) msg << ", alignment scale " << std::setprecision(9) << r.diagnostics.alignment->scale;
  return {kExitOk, msg.str()};
}

int cmd_run(const RunOptions& o, const Env& env, std::ostream& out, std::ostream& err) {
  std::shared_ptr<const VelocimeterModel> model;
  if (o.velocimeter != "oracle") {
    if (!fs::exists(o.velocimeter)) fail(ErrorKind::Io, "model file " + o.velocimeter + " not found");
    model = std::make_shared<const VelocimeterModel>(load_model_file(o.velocimeter, nullptr));
  }
  const fs::path out_root = env.output(o.out);
  const bool batch = o.bundles.size() > 1;
  std::vector<RunOutcome> outcomes(o.bundles.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < o.bundles.size(); i = next++) {
      const fs::path bundle(o.bundles[i]);
      const fs::path dir = batch ? out_root / bundle.filename() : out_root;
      try {
        outcomes[i] = run_one(o, env, bundle, dir, model);
      } catch (const Error& e) {
        std::string where = e.stage().empty() ? "" : " [stage " + e.stage() + "]";
        outcomes[i] = {exit_code_for(e.kind()),
                       bundle.string() + ": error" + where + ": " + std::string(to_string(e.kind())) + ": " + e.detail()};
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(o.bundles.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitOk;
  for (const auto& oc : outcomes) {
    (oc.code == kExitOk ? out : err) << oc.message << '\n';
    if (oc.code != kExitOk && code == kExitOk) code = oc.code;
  }
  return code;
}

// ---------------------------------------------------------------- eval

struct EvalOptions {
  std::string bundle;
  std::string result;
  std::string est_human, gt_human, est_camera, gt_camera, est_joints, gt_joints;
  std::string intrinsics = "exact";
  std::string out;
  std::string name = "sequence";
  std::size_t segment_length = kDefaultSegmentLength;
};

void add_eval(CLI::App& app, EvalOptions& o) {
  app.add_option("--bundle", o.bundle, "scene bundle providing ground truth");
  app.add_option("--result", o.result, "directory written by `run`");
  app.add_option("--est-human", o.est_human);
  app.add_option("--gt-human", o.gt_human);
  app.add_option("--est-camera", o.est_camera);
  app.add_option("--gt-camera", o.gt_camera);
  app.add_option("--est-joints", o.est_joints, "world-frame .jsq");
  app.add_option("--gt-joints", o.gt_joints, "world-frame .jsq");
  app.add_option("--intrinsics", o.intrinsics, "used to lift observations with --bundle/--result");
  app.add_option("--out", o.out, "report directory")->required();
  app.add_option("--name", o.name, "sequence name in the CSV");
  app.add_option("--segment-length", o.segment_length);
}

JointSequence to_camera_frame(const JointSequence& world, const Trajectory& camera) {
  if (world.size() != camera.size()) fail(ErrorKind::LengthMismatch, "joints and camera differ in length");
  std::vector<JointFrame> frames(world.size());
  for (std::size_t i = 0; i < world.size(); ++i) {
    const RigidTransform c = inverse(camera[i]);
    for (std::size_t j = 0; j < kNumJoints; ++j) frames[i][j] = apply_to_point(c, world[i][j]);
  }
  return JointSequence(std::move(frames), CoordinateFrame::Camera, world.frame_rate());
}

int cmd_eval(const EvalOptions& o, const Env& env, std::ostream& out) {
  EvaluationInput in;
  in.segment_length = o.segment_length;
  if (!o.bundle.empty()) {
    const io::SceneBundle b = io::read_scene_bundle(o.bundle);
    in.gt_human = b.gt_human;
    in.gt_camera = b.gt_camera;
    in.gt_joints_world = b.gt_joints_world;
    in.gt_joints_camera = to_camera_frame(b.gt_joints_world, b.gt_camera);
    if (!o.result.empty()) {
      const fs::path r(o.result);
      in.est_human = io::read_traj(r / "human.traj");
      in.est_camera = io::read_traj(r / "camera.traj");
      const CameraIntrinsics k = parse_intrinsics(o.intrinsics, b.intrinsics);
      const JointSequence cam = camera_joints_from_observations(b.observations, k, b.gt_human.frame_rate);
      in.est_joints_camera = cam;
      std::vector<JointFrame> world(cam.size());
      for (std::size_t i = 0; i < cam.size(); ++i) {
        for (std::size_t j = 0; j < kNumJoints; ++j) world[i][j] = apply_to_point((*in.est_camera)[i], cam[i][j]);
      }
      in.est_joints_world = JointSequence(std::move(world), CoordinateFrame::World, cam.frame_rate());
    }
  }
  if (!o.gt_human.empty()) in.gt_human = io::read_traj(o.gt_human);
  if (!o.est_human.empty()) in.est_human = io::read_traj(o.est_human);
  if (!o.gt_camera.empty()) in.gt_camera = io::read_traj(o.gt_camera);
  if (!o.est_camera.empty()) in.est_camera = io::read_traj(o.est_camera);
  if (!o.gt_joints.empty()) in.gt_joints_world = io::read_jsq(o.gt_joints);
  if (!o.est_joints.empty()) in.est_joints_world = io::read_jsq(o.est_joints);
  if (!(in.est_human || in.est_camera || in.est_joints_world)) {
    fail(ErrorKind::Config, "nothing to evaluate: give --result with --bundle or explicit --est-* files");
  }
  const SegmentReport rep = evaluate(in);
  const fs::path dir = env.output(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + dir.string());
  io::write_text(dir / "report.json", io::report_to_json(rep).dump(2) + "\n");
  io::write_text(dir / "report.csv", io::report_to_csv(rep, o.name));
  out << std::setprecision(6);
  if (rep.human) out << "H-ATE " << rep.human->ate_mm << " mm, H-AS " << rep.human->alignment_scale << '\n';
  if (rep.camera) out << "C-ATE " << rep.camera->ate_mm << " mm, C-AS " << rep.camera->alignment_scale << '\n';
  if (rep.world) out << "W-MPJPE100 " << rep.world->w_mpjpe << " mm, WA-MPJPE100 " << rep.world->wa_mpjpe << " mm\n";
  if (rep.camera_frame) {
    out << "MPJPE " << rep.camera_frame->mpjpe << " mm, PA-MPJPE " << rep.camera_frame->pa_mpjpe
        << " mm, T-MPJPE " << rep.camera_frame->t_mpjpe << " mm, Accl " << rep.camera_frame->accel << " m/s^2\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- training

struct TrainOptions {
  std::string corpus;
  bool synthetic = false;
  std::string out;
  int epochs = 8;
  int hidden = 256;
  int batch = 32;
  double lr = 1e-3;
  std::size_t sequences = 800;
  std::size_t frames = 160;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

void add_train(CLI::App& app, TrainOptions& o) {
  auto* dir = app.add_option("--corpus", o.corpus, "corpus directory of .jsq files");
  auto* syn = app.add_flag("--synthetic", o.synthetic, "train on the default synthetic corpus");
  dir->excludes(syn);
  app.add_option("--out", o.out, "model file")->required();
  app.add_option("--epochs", o.epochs);
  app.add_option("--hidden", o.hidden, "GRU hidden width");
  app.add_option("--batch", o.batch);
  app.add_option("--lr", o.lr);
  app.add_option("--sequences", o.sequences, "synthetic corpus size");
  app.add_option("--frames", o.frames, "synthetic sequence length");
  app.add_option("--seed", o.seed);
  app.add_flag("--verbose", o.verbose);
}

int cmd_train(const TrainOptions& o, const Env& env, std::ostream& out) {
  const std::uint64_t seed = o.seed.value_or(env.seed);
  std::vector<MotionCorpusEntry> corpus;
  std::string corpus_id;
  if (!o.corpus.empty()) {
    corpus = io::read_corpus(o.corpus);
    corpus_id = fs::path(o.corpus).filename().string();
  } else if (o.synthetic) {
    corpus = build_motion_corpus({o.sequences, o.frames, 0.0, seed});
    corpus_id = "synthetic-" + std::to_string(o.sequences) + "x" + std::to_string(o.frames);
  } else {
    fail(ErrorKind::Config, "give --corpus DIR or --synthetic");
  }
  if (corpus.empty()) fail(ErrorKind::EmptyCorpus, "corpus has no sequences");
  TrainingConfig cfg;
  cfg.descriptor.hidden_width = o.hidden;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.learning_rate = o.lr;
  cfg.seed = seed;
  cfg.corpus_id = corpus_id;
  cfg.verbose = o.verbose;
  const TrainingResult r = train_velocimeter(corpus, cfg);
  const fs::path path = env.output(o.out);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_model_file(r.model, path.string());
  out << std::setprecision(6) << "held-out MAE " << r.heldout_mae << " m/frame (mean speed " << r.heldout_mean_speed
      << " m/frame, ratio " << r.heldout_mae / std::max(r.heldout_mean_speed, 1e-12) << ")\n"
      << "model checksum " << std::hex << std::setw(16) << std::setfill('0') << r.model.parameter_checksum()
      << std::dec << '\n';
  return kExitOk;
}

struct CorpusOptions {
  std::string out;
  std::size_t sequences = 800;
  std::size_t frames = 160;
  double joint_noise = 0.0;
  std::optional<std::uint64_t> seed;
};

void add_corpus(CLI::App& app, CorpusOptions& o) {
  app.add_option("--out", o.out, "corpus directory")->required();
  app.add_option("--sequences", o.sequences);
  app.add_option("--frames", o.frames);
  app.add_option("--joint-noise", o.joint_noise, "meters");
  app.add_option("--seed", o.seed);
}

int cmd_corpus(const CorpusOptions& o, const Env& env, std::ostream& out) {
  const auto corpus = build_motion_corpus({o.sequences, o.frames, o.joint_noise, o.seed.value_or(env.seed)});
  const fs::path dir = env.output(o.out);
  io::write_corpus(dir, corpus);
  out << "wrote " << corpus.size() << " sequences to " << dir.string() << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- export

struct ExportOptions {
  std::vector<std::string> inputs;
  std::string out;
  bool from_csv = false;
};

void add_export(CLI::App& app, ExportOptions& o) {
  app.add_option("inputs", o.inputs, ".traj files (or one CSV with --from-csv)")->required();
  app.add_option("--out", o.out, "output file")->required();
  app.add_flag("--from-csv", o.from_csv, "convert a CSV back to .traj");
}

int cmd_export(const ExportOptions& o, const Env& env, std::ostream& out) {
  const fs::path dst = env.output(o.out);
  if (o.from_csv) {
    if (o.inputs.size() != 1) fail(ErrorKind::Config, "--from-csv takes exactly one input");
    io::write_traj(dst, io::traj_from_csv(io::read_text(o.inputs.front())));
  } else if (o.inputs.size() == 1) {
    io::write_text(dst, io::traj_to_csv(io::read_traj(o.inputs.front())));
  } else {
    std::vector<Trajectory> trajs;
    std::vector<std::string> names;
    for (const auto& p : o.inputs) {
      trajs.push_back(io::read_traj(p));
      names.push_back(fs::path(p).stem().string());
    }
    io::write_text(dst, io::overlay_csv(trajs, names));
  }
  out << "wrote " << dst.string() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"World-grounded human and camera trajectories from weak-perspective estimates and scaleless VO"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "worldtraj 0.1.0");

  SimulateOptions sim;
  RunOptions run_opts;
  EvalOptions eval;
  TrainOptions train;
  CorpusOptions corpus;
  ExportOptions exp;
  add_simulate(*app.add_subcommand("simulate", "generate a synthetic scene bundle"), sim);
  add_run(*app.add_subcommand("run", "recover trajectories for scene bundles"), run_opts);
  add_eval(*app.add_subcommand("eval", "evaluate trajectories against ground truth"), eval);
  add_train(*app.add_subcommand("train-mv", "train the learned velocimeter"), train);
  add_corpus(*app.add_subcommand("make-corpus", "write a synthetic velocimeter corpus"), corpus);
  add_export(*app.add_subcommand("export", "trajectories to CSV for plotting"), exp);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Env env = Env::load();
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "simulate") return cmd_simulate(sim, env, out);
    if (cmd == "run") return cmd_run(run_opts, env, out, err);
    if (cmd == "eval") return cmd_eval(eval, env, out);
    if (cmd == "train-mv") return cmd_train(train, env, out);
    if (cmd == "make-corpus") return cmd_corpus(corpus, env, out);
    if (cmd == "export") return cmd_export(exp, env, out);
  } catch (const Error& e) {
    err << "error";
    if (!e.stage().empty()) err << " [stage " << e.stage() << "]";
    err << ": " << to_string(e.kind()) << ": " << e.detail() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: io: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace worldtraj::cli
