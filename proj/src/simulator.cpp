#include "worldtraj/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "worldtraj/canonical.hpp"
#include "worldtraj/errors.hpp"
#include "worldtraj/rng.hpp"

namespace worldtraj {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Body dimensions, meters.
constexpr double kThigh = 0.42;
constexpr double kShin = 0.42;
constexpr double kAnkleHeight = 0.07;
constexpr double kHipHalfWidth = 0.09;
constexpr double kHipDrop = 0.03;
constexpr double kSpine = 0.50;
constexpr double kHead = 0.25;
constexpr double kShoulderHalfWidth = 0.18;
constexpr double kShoulderDrop = 0.04;
constexpr double kUpperArm = 0.29;
constexpr double kForearm = 0.26;
constexpr double kIdlePelvisHeight = 0.92;

struct Gait {
  double step_freq = 2.0;   // steps per second
  double stance = 0.5;      // fraction of the stride a foot is planted
  double pelvis_height = 0.87;
  double bob = 0.02;
  double sway = 0.03;
  double yaw = 0.08;
  double arm_swing = 0.35;
  double elbow_bend = 0.25;
  double lean = 0.0;
  double lift = 0.08;
  double phase = 0.0;       // strides
};

struct PathPoint {
  Vec2 point;
  double heading;
};

Vec2 dir2(double a) { return {std::cos(a), std::sin(a)}; }
Vec2 left2(double a) { return {-std::sin(a), std::cos(a)}; }

class Path {
 public:
  Path(MotionKind kind, const MotionParams& p, double total_length)
      : kind_(kind), p_(p), start_(p.start.x(), p.start.y()) {
    if (kind == MotionKind::TurnWalk) {
      turn_len_ = std::max(0.0, speed_of(kind, p)) * p.turn_duration;
      turn_start_ = 0.5 * (total_length - turn_len_);
    }
  }

  static double speed_of(MotionKind kind, const MotionParams& p) {
    if (kind == MotionKind::Idle) return 0.0;
    if (p.speed > 0.0) return p.speed;
    return kind == MotionKind::Run ? 3.0 : 1.2;
  }

  PathPoint at(double s) const {
    const double h0 = p_.heading;
    switch (kind_) {
      case MotionKind::Idle:
      case MotionKind::StraightWalk:
      case MotionKind::Run:
        return {start_ + s * dir2(h0), h0};
      case MotionKind::CircleWalk: {
        const double r = p_.circle_radius;
        const Vec2 center = start_ + r * left2(h0);
        const double h = h0 + s / r;
        return {center - r * left2(h), h};
      }
      case MotionKind::TurnWalk: {
        const double a = p_.turn_angle;
        if (s <= turn_start_ || std::abs(a) < 1e-12 || turn_len_ <= 0.0) return {start_ + s * dir2(h0), h0};
        const Vec2 entry = start_ + turn_start_ * dir2(h0);
        const double r = turn_len_ / a;  // signed
        const Vec2 center = entry + r * left2(h0);
        if (s <= turn_start_ + turn_len_) {
          const double h = h0 + (s - turn_start_) / r;
          return {center - r * left2(h), h};
        }
        const double h1 = h0 + a;
        const Vec2 exit = center - r * left2(h1);
        return {exit + (s - turn_start_ - turn_len_) * dir2(h1), h1};
      }
    }
    return {start_, h0};
  }

 private:
  MotionKind kind_;
  MotionParams p_;
  Vec2 start_;
  double turn_start_ = 0.0;
  double turn_len_ = 0.0;
};

Gait sample_gait(MotionKind kind, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> jitter(0.95, 1.05);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Gait g;
  if (kind == MotionKind::Run) {
    g.step_freq = 2.8;
    g.stance = 0.35;
    g.pelvis_height = 0.84;
    g.bob = 0.03;
    g.sway = 0.015;
    g.yaw = 0.06;
    g.arm_swing = 0.6;
    g.elbow_bend = 1.4;
    g.lean = 0.12;
    g.lift = 0.15;
  }
  g.step_freq *= jitter(gen);
  g.arm_swing *= jitter(gen);
  g.sway *= jitter(gen);
  g.bob *= jitter(gen);
  g.phase = unit(gen);
  return g;
}

// Two-bone IK; the knee bends towards `pole`. The ankle is pulled in when
// out of reach so bone lengths stay fixed.
Vec3 solve_knee(const Vec3& hip, Vec3& ankle, const Vec3& pole) {
  Vec3 d = ankle - hip;
  double len = d.norm();
  const double reach = kThigh + kShin - 1e-6;
  if (len > reach) {
    ankle = hip + d * (reach / len);
    d = ankle - hip;
    len = reach;
  }
  const Vec3 u = d / len;
  Vec3 side = pole - pole.dot(u) * u;
  if (side.norm() < 1e-9) side = u.unitOrthogonal();
  side.normalize();
  const double c = std::clamp((kThigh * kThigh + len * len - kShin * kShin) / (2.0 * kThigh * len), -1.0, 1.0);
  const double a = std::acos(c);
  return hip + kThigh * (std::cos(a) * u + std::sin(a) * side);
}

void place_arm(JointFrame& j, const Rotation3& body, Joint shoulder, Joint elbow, Joint wrist, double swing,
               double bend) {
  const Vec3 down(0.0, 0.0, -1.0);
  const Vec3 upper = body * (Rotation3::about_y(-swing) * (kUpperArm * down));
  const Vec3 lower = body * (Rotation3::about_y(-swing - bend) * (kForearm * down));
  j[idx(elbow)] = j[idx(shoulder)] + upper;
  j[idx(wrist)] = j[idx(elbow)] + lower;
}

void place_upper_body(JointFrame& j, const Vec3& pelvis, const Rotation3& body, double breath) {
  j[idx(Joint::Pelvis)] = pelvis;
  j[idx(Joint::RightHip)] = pelvis + body * Vec3(0.0, -kHipHalfWidth, -kHipDrop);
  j[idx(Joint::LeftHip)] = pelvis + body * Vec3(0.0, kHipHalfWidth, -kHipDrop);
  const Vec3 neck = pelvis + body * Vec3(0.0, 0.0, kSpine + breath);
  j[idx(Joint::Neck)] = neck;
  j[idx(Joint::HeadTop)] = neck + body * Vec3(0.02, 0.0, kHead);
  j[idx(Joint::RightShoulder)] = neck + body * Vec3(0.0, -kShoulderHalfWidth, -kShoulderDrop);
  j[idx(Joint::LeftShoulder)] = neck + body * Vec3(0.0, kShoulderHalfWidth, -kShoulderDrop);
}

}  // namespace

std::string_view to_string(MotionKind kind) {
  switch (kind) {
    case MotionKind::Idle: return "idle";
    case MotionKind::StraightWalk: return "straight-walk";
    case MotionKind::CircleWalk: return "circle-walk";
    case MotionKind::TurnWalk: return "turn-walk";
    case MotionKind::Run: return "run";
  }
  return "unknown";
}

MotionKind motion_kind_from_string(std::string_view name) {
  for (MotionKind k : {MotionKind::Idle, MotionKind::StraightWalk, MotionKind::CircleWalk, MotionKind::TurnWalk,
                       MotionKind::Run}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorKind::InvalidArgument, "unknown motion kind '" + std::string(name) + "'");
}

GeneratedMotion generate_motion(MotionKind kind, const MotionParams& params, std::size_t frames,
                                std::uint64_t seed) {
  if (frames < 2) fail(ErrorKind::InvalidArgument, "motion needs at least 2 frames");
  if (!(params.frame_rate > 0.0)) fail(ErrorKind::InvalidArgument, "frame rate must be positive");
  if (kind == MotionKind::CircleWalk && !(std::abs(params.circle_radius) > 0.0)) {
    fail(ErrorKind::InvalidArgument, "circle radius must be nonzero");
  }
  if (kind == MotionKind::TurnWalk && !(params.turn_duration > 0.0)) {
    fail(ErrorKind::InvalidArgument, "turn duration must be positive");
  }

  auto gen = SplitRng(seed).stream("gait");
  const Gait g = sample_gait(kind, gen);
  const double fps = params.frame_rate;
  const double v = Path::speed_of(kind, params);
  const Path path(kind, params, v * static_cast<double>(frames - 1) / fps);
  const double stride_t = 2.0 / g.step_freq;
  const double stride_len = v * stride_t;
  const double ground = params.start.z();

  GeneratedMotion out;
  out.kind = kind;
  out.root.scale_status = ScaleStatus::Metric;
  out.root.frame_rate = fps;
  std::vector<JointFrame> joints(frames);
  out.heading.resize(frames);

  for (std::size_t i = 0; i < frames; ++i) {
    const double t = static_cast<double>(i) / fps;
    const PathPoint c = path.at(v * t);
    out.heading[i] = c.heading;
    JointFrame& j = joints[i];

    if (kind == MotionKind::Idle) {
      const Rotation3 body = Rotation3::about_z(c.heading);
      const Vec3 pelvis(c.point.x(), c.point.y(), ground + kIdlePelvisHeight);
      const double breath = 0.005 * std::sin(kTwoPi * 0.25 * t + kTwoPi * g.phase);
      place_upper_body(j, pelvis, body, breath);
      const Vec3 fwd = body * Vec3::UnitX();
      for (int side : {-1, 1}) {
        const Vec2 foot2 = c.point + side * kHipHalfWidth * left2(c.heading);
        Vec3 ankle(foot2.x(), foot2.y(), ground + kAnkleHeight);
        const Joint hip = side < 0 ? Joint::RightHip : Joint::LeftHip;
        const Vec3 knee = solve_knee(j[idx(hip)], ankle, fwd);
        j[idx(side < 0 ? Joint::RightKnee : Joint::LeftKnee)] = knee;
        j[idx(side < 0 ? Joint::RightAnkle : Joint::LeftAnkle)] = ankle;
      }
      const double sway = 0.07 * std::sin(kTwoPi * 0.3 * t + kTwoPi * g.phase);
      place_arm(j, body, Joint::RightShoulder, Joint::RightElbow, Joint::RightWrist, sway, 0.15);
      place_arm(j, body, Joint::LeftShoulder, Joint::LeftElbow, Joint::LeftWrist, -sway, 0.15);
      out.root.poses.push_back({body, pelvis});
      continue;
    }

    // Stride phase of each foot; the left foot trails by half a stride.
    const double q_right = g.phase + t / stride_t;
    const double q_left = q_right + 0.5;
    const double mid = q_right - 0.5 * g.stance;
    const double yaw = g.yaw * std::sin(kTwoPi * mid);
    const Rotation3 body = Rotation3::about_z(c.heading + yaw) * Rotation3::about_y(g.lean);
    const double sway = -g.sway * std::cos(kTwoPi * mid);
    const double bob = g.bob * std::cos(2.0 * kTwoPi * mid);
    const Vec2 p2 = c.point + sway * left2(c.heading);
    const Vec3 pelvis(p2.x(), p2.y(), ground + g.pelvis_height + bob);
    place_upper_body(j, pelvis, body, 0.0);

    const Vec3 fwd = body * Vec3::UnitX();
    for (int side : {-1, 1}) {
      const double q = side < 0 ? q_right : q_left;
      const double n = std::floor(q);
      const double u = q - n;
      // Foothold: where the pelvis passes mid-stance of this stride.
      const double t0 = (n - (q - t / stride_t)) * stride_t;
      const double foothold = v * (t0 + 0.5 * g.stance * stride_t);
      double progress = foothold;
      double lift = 0.0;
      if (u >= g.stance) {
        const double w = (u - g.stance) / (1.0 - g.stance);
        progress = foothold + stride_len * 0.5 * (1.0 - std::cos(kPi * w));
        lift = g.lift * std::sin(kPi * w);
      }
      const PathPoint fp = path.at(progress);
      const Vec2 foot2 = fp.point + side * kHipHalfWidth * left2(fp.heading);
      Vec3 ankle(foot2.x(), foot2.y(), ground + kAnkleHeight + lift);
      const Joint hip = side < 0 ? Joint::RightHip : Joint::LeftHip;
      j[idx(side < 0 ? Joint::RightKnee : Joint::LeftKnee)] = solve_knee(j[idx(hip)], ankle, fwd);
      j[idx(side < 0 ? Joint::RightAnkle : Joint::LeftAnkle)] = ankle;
    }
    // Arms swing against the opposite leg.
    const double right_arm = g.arm_swing * std::cos(kTwoPi * (q_left - 0.5 * g.stance));
    const double left_arm = g.arm_swing * std::cos(kTwoPi * (q_right - 0.5 * g.stance));
    place_arm(j, body, Joint::RightShoulder, Joint::RightElbow, Joint::RightWrist, right_arm, g.elbow_bend);
    place_arm(j, body, Joint::LeftShoulder, Joint::LeftElbow, Joint::LeftWrist, left_arm, g.elbow_bend);
    out.root.poses.push_back({body, pelvis});
  }
  out.joints = JointSequence(std::move(joints), CoordinateFrame::World, fps);
  return out;
}

std::vector<GeneratedMotion> generate_interactive_pair(std::size_t frames, const Vec3& center, double separation,
                                                       std::uint64_t seed) {
  const SplitRng rng(seed);
  MotionParams a;
  a.start = center - Vec3(0.5 * separation, 0.0, 0.0);
  a.heading = 0.0;
  MotionParams b;
  b.start = center + Vec3(0.5 * separation, 0.0, 0.0);
  b.heading = kPi;
  return {generate_motion(MotionKind::Idle, a, frames, rng.derive("first")),
          generate_motion(MotionKind::Idle, b, frames, rng.derive("second"))};
}

CharacterTrack character_track(std::span<const GeneratedMotion> motions, Anchor anchor) {
  if (motions.empty()) fail(ErrorKind::InvalidArgument, "no motions for the character track");
  const std::size_t k = motions.front().joints.size();
  for (const auto& m : motions) {
    if (m.joints.size() != k) fail(ErrorKind::LengthMismatch, "motions differ in length");
  }
  const Joint anchor_joint = anchor == Anchor::Neck ? Joint::Neck : Joint::Pelvis;
  CharacterTrack track;
  track.states.reserve(k);
  track.joints.reserve(k);
  std::vector<CharacterState> here(motions.size());
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t m = 0; m < motions.size(); ++m) {
      here[m].position = motions[m].joints[i][idx(anchor_joint)];
      here[m].theta_ch = kPi / 2.0;
      here[m].phi_ch = wrap_two_pi(motions[m].heading[i]);
      here[m].anchor = anchor;
    }
    track.states.push_back(average_characters(here));
    // Framing uses the first subject, the one observations are emitted for.
    track.joints.push_back(motions.front().joints[i]);
  }
  return track;
}

ViewSettings view_from_intrinsics(const CameraIntrinsics& intrinsics) {
  intrinsics.validate();
  const double larger = std::max(intrinsics.image_width, intrinsics.image_height);
  return {2.0 * std::atan(0.5 * larger / intrinsics.focal_px), intrinsics.aspect()};
}

SyntheticScene assemble_scene(const GeneratedMotion& motion, const Trajectory& camera_sim,
                              const CameraIntrinsics& intrinsics, std::uint64_t seed) {
  const std::size_t k = motion.joints.size();
  if (camera_sim.size() != k || motion.root.size() != k) {
    fail(ErrorKind::LengthMismatch, "camera path and motion differ in length");
  }
  SyntheticScene scene;
  scene.seed = seed;
  scene.motion = motion.kind;
  scene.intrinsics = intrinsics;
  scene.world_from_sim = inverse(camera_sim[0]);
  const RigidTransform& w = scene.world_from_sim;
  const double fps = motion.joints.frame_rate();

  scene.gt_camera.scale_status = ScaleStatus::Metric;
  scene.gt_camera.frame_rate = fps;
  scene.gt_human.scale_status = ScaleStatus::Metric;
  scene.gt_human.frame_rate = fps;
  std::vector<JointFrame> joints(k);
  for (std::size_t i = 0; i < k; ++i) {
    scene.gt_camera.poses.push_back(i == 0 ? RigidTransform::identity() : compose(w, camera_sim[i]));
    scene.gt_human.poses.push_back(compose(w, motion.root[i]));
    for (std::size_t j = 0; j < kNumJoints; ++j) joints[i][j] = apply_to_point(w, motion.joints[i][j]);
    // Keep the pelvis joint and root position bitwise identical.
    joints[i][idx(Joint::Pelvis)] = scene.gt_human.poses.back().translation;
  }
  scene.gt_joints_world = JointSequence(std::move(joints), CoordinateFrame::World, fps);
  return scene;
}

SyntheticScene generate_scene(const SceneConfig& config) {
  const SplitRng rng(config.seed);
  MotionParams mp = config.motion_params;
  const GeneratedMotion motion = generate_motion(config.motion, mp, config.frames, rng.derive("motion"));
  const std::vector<GeneratedMotion> motions{motion};
  const CharacterTrack track = character_track(motions, config.anchor);
  const ViewSettings view = view_from_intrinsics(config.intrinsics);

  ComposedShots shots;
  switch (config.plan) {
    case CameraPlan::Single: {
      ShotSpec spec = config.shot;
      spec.view = view;
      spec.seed = rng.derive("shot");
      shots = single_shot(track, spec);
      break;
    }
    case CameraPlan::Composed: {
      CompositionPolicy policy = config.policy;
      policy.view = view;
      policy.seed = rng.derive("composition");
      shots = compose_shots(track, policy);
      break;
    }
    case CameraPlan::Static: {
      const Keyframe kf{0, spherical_to_world(track.states[0], config.shot.base), config.shot.base, std::nullopt};
      shots.keyframes = {kf};
      ShotSegment seg;
      seg.kind = ShotKind::Pan;
      seg.keyframes = shots.keyframes;
      seg.last_frame = static_cast<int>(config.frames) - 1;
      seg.parameters = {{"static", 1.0}};
      shots.segments = {seg};
      shots.camera.poses.assign(config.frames, kf.camera_pose);
      shots.bbox_longest_edge = character_bbox_longest_edge(track);
      break;
    }
  }
  shots.camera.frame_rate = mp.frame_rate;
  SyntheticScene scene = assemble_scene(motion, shots.camera, config.intrinsics, config.seed);
  scene.shots = std::move(shots);
  if (config.check_in_view) check_subject_in_view(scene, config.view_margin);
  return scene;
}

void check_subject_in_view(const SyntheticScene& scene, double margin) {
  const auto& k = scene.intrinsics;
  const double w = k.image_width;
  const double h = k.image_height;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const RigidTransform cam_from_world = inverse(scene.gt_camera[i]);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const Vec3 p = apply_to_point(cam_from_world, scene.gt_joints_world[i][j]);
      const std::string where = "frame " + std::to_string(i) + ", joint " + std::string(kJointNames[j]);
      if (p.z() <= kMinSubjectDepth) fail(ErrorKind::SubjectBehindCamera, "subject behind camera at " + where);
      const double u = k.focal_px * p.x() / p.z() + 0.5 * w;
      const double v = k.focal_px * p.y() / p.z() + 0.5 * h;
      if (u < margin * w || u > (1.0 - margin) * w || v < margin * h || v > (1.0 - margin) * h) {
        fail(ErrorKind::SubjectOutOfView, "subject leaves the view at " + where);
      }
    }
  }
}

std::vector<WeakPerspectiveObservation> simulate_ehps(const SyntheticScene& scene, double joint_noise_sigma,
                                                      std::uint64_t seed, EhpsMode mode) {
  if (!(joint_noise_sigma >= 0.0)) fail(ErrorKind::InvalidArgument, "joint noise must be nonnegative");
  if (scene.gt_camera.size() != scene.size() || scene.gt_joints_world.size() != scene.size()) {
    fail(ErrorKind::LengthMismatch, "scene tracks differ in length");
  }
  const auto& k = scene.intrinsics;
  const double ndc_f = k.ndc_focal();
  auto gen = SplitRng(seed).stream("ehps");
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<WeakPerspectiveObservation> out(scene.size());
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const RigidTransform cam_from_world = inverse(scene.gt_camera[i]);
    const RigidTransform root = compose(cam_from_world, scene.gt_human[i]);
    const Vec3 t = root.translation;
    if (t.z() <= kMinSubjectDepth) {
      fail(ErrorKind::SubjectBehindCamera, "root depth " + std::to_string(t.z()) + " m at frame " + std::to_string(i));
    }
    WeakPerspectiveObservation& obs = out[i];
    obs.global_orientation = root.rotation;
    std::array<Vec3, kNumJoints> cam_joints;
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      cam_joints[j] = apply_to_point(cam_from_world, scene.gt_joints_world[i][j]);
      Vec3 offset = cam_joints[j] - t;
      if (joint_noise_sigma > 0.0) {
        offset += joint_noise_sigma * Vec3(noise(gen), noise(gen), noise(gen));
      }
      obs.joints_camera[j] = offset;
    }
    if (mode == EhpsMode::Exact) {
      obs.scale = ndc_f / t.z();
      obs.t_x = t.x();
      obs.t_y = t.y();
      continue;
    }
    // u = s dx + a, v = s dy + b against the true pinhole projection.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * kNumJoints, 3);
    Eigen::VectorXd b(2 * kNumJoints);
    for (std::size_t j = 0; j < kNumJoints; ++j) {
      const Vec3& p = cam_joints[j];
      if (p.z() <= 0.0) fail(ErrorKind::SubjectBehindCamera, "joint behind camera at frame " + std::to_string(i));
      const auto r = static_cast<Eigen::Index>(2 * j);
      a(r, 0) = obs.joints_camera[j].x();
      a(r, 1) = 1.0;
      b(r) = ndc_f * p.x() / p.z();
      a(r + 1, 0) = obs.joints_camera[j].y();
      a(r + 1, 2) = 1.0;
      b(r + 1) = ndc_f * p.y() / p.z();
    }
    const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
    if (!(x(0) > 0.0)) fail(ErrorKind::SubjectBehindCamera, "weak-perspective fit failed at frame " + std::to_string(i));
    obs.scale = x(0);
    obs.t_x = x(1) / x(0);
    obs.t_y = x(2) / x(0);
  }
  return out;
}

void VONoiseModel::validate() const {
  if (!(scale_factor > 0.0) || !std::isfinite(scale_factor)) {
    fail(ErrorKind::InvalidArgument, "VO scale factor must be positive");
  }
  if (!(rotation_noise_sigma >= 0.0 && translation_noise_sigma >= 0.0 && drift_per_frame >= 0.0)) {
    fail(ErrorKind::InvalidArgument, "VO noise parameters must be nonnegative");
  }
}

Trajectory simulate_vo(const Trajectory& gt_camera, const VONoiseModel& noise, std::uint64_t seed) {
  noise.validate();
  if (gt_camera.empty()) fail(ErrorKind::InvalidArgument, "camera trajectory is empty");
  if (!first_pose_is_identity(gt_camera)) {
    fail(ErrorKind::NonIdentityFirstFrame, "ground-truth camera must start at identity");
  }
  const SplitRng rng(seed);
  auto gen_t = rng.stream("vo-translation");
  auto gen_r = rng.stream("vo-rotation");
  auto gen_d = rng.stream("vo-drift");
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec3 drift_dir(n01(gen_d), n01(gen_d), n01(gen_d));
  drift_dir = drift_dir.norm() > 0.0 ? drift_dir.normalized() : Vec3::UnitX();

  Trajectory out;
  out.scale_status = ScaleStatus::Scaleless;
  out.frame_rate = gt_camera.frame_rate;
  out.poses.reserve(gt_camera.size());
  out.poses.push_back(RigidTransform::identity());
  for (std::size_t i = 1; i < gt_camera.size(); ++i) {
    Vec3 t = gt_camera[i].translation;
    Rotation3 r = gt_camera[i].rotation;
    if (noise.translation_noise_sigma > 0.0) {
      t += noise.translation_noise_sigma * Vec3(n01(gen_t), n01(gen_t), n01(gen_t));
    }
    if (noise.drift_per_frame > 0.0) t += noise.drift_per_frame * static_cast<double>(i) * drift_dir;
    if (noise.rotation_noise_sigma > 0.0) {
      r = r * Rotation3::from_axis_angle(noise.rotation_noise_sigma * Vec3(n01(gen_r), n01(gen_r), n01(gen_r)));
    }
    out.poses.push_back({r, noise.scale_factor * t});
  }
  return out;
}

VelocitySequence ground_truth_canonical_velocities(const SyntheticScene& scene) {
  const VelocitySequence world = difference_positions(scene.gt_human.positions(), CoordinateFrame::World);
  return rotate_velocities(world, scene.gt_human[0].rotation.inverse(), CoordinateFrame::Canonical);
}

MotionCorpusEntry corpus_entry_from_motion(const GeneratedMotion& motion, std::string label) {
  const CanonicalTransformSequence tf = canonical_transform(motion.joints, motion.root[0].rotation);
  MotionCorpusEntry e{canonicalize_joints(motion.joints, tf),
                      rotate_velocities(difference_positions(motion.root.positions(), CoordinateFrame::World),
                                        tf.shared_rotation, CoordinateFrame::Canonical),
                      std::move(label)};
  return e;
}

std::vector<MotionCorpusEntry> build_motion_corpus(const CorpusConfig& config) {
  if (config.frames < 2) fail(ErrorKind::InvalidArgument, "corpus sequences need at least 2 frames");
  const SplitRng rng(config.seed);
  std::vector<MotionCorpusEntry> out;
  out.reserve(config.sequences);
  constexpr MotionKind kinds[] = {MotionKind::StraightWalk, MotionKind::CircleWalk, MotionKind::TurnWalk,
                                  MotionKind::Run, MotionKind::Idle};
  for (std::size_t i = 0; i < config.sequences; ++i) {
    auto gen = rng.stream("params", i);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const MotionKind kind = kinds[i % std::size(kinds)];
    MotionParams p;
    p.heading = kTwoPi * unit(gen);
    p.start = Vec3(10.0 * (unit(gen) - 0.5), 10.0 * (unit(gen) - 0.5), 0.0);
    p.speed = kind == MotionKind::Run ? 2.2 + 1.4 * unit(gen) : 0.8 + 0.8 * unit(gen);
    p.circle_radius = (1.5 + 3.5 * unit(gen)) * (unit(gen) < 0.5 ? -1.0 : 1.0);
    p.turn_angle = (kPi / 3.0 + (kPi * 0.6) * unit(gen)) * (unit(gen) < 0.5 ? -1.0 : 1.0);
    p.turn_duration = 0.7 + 0.8 * unit(gen);
    GeneratedMotion m = generate_motion(kind, p, config.frames, rng.derive("motion", i));
    if (config.joint_noise_sigma > 0.0) {
      auto noise_gen = rng.stream("noise", i);
      std::normal_distribution<double> n01(0.0, config.joint_noise_sigma);
      std::vector<JointFrame> noisy = m.joints.frames();
      for (auto& f : noisy) {
        for (auto& jp : f) jp += Vec3(n01(noise_gen), n01(noise_gen), n01(noise_gen));
      }
      m.joints = JointSequence(std::move(noisy), CoordinateFrame::World, m.joints.frame_rate());
    }
    out.push_back(corpus_entry_from_motion(m, std::string(to_string(kind))));
  }
  return out;
}

}  // namespace worldtraj
