#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "worldtraj/depth.hpp"
#include "worldtraj/shots.hpp"
#include "worldtraj/skeleton.hpp"
#include "worldtraj/trajectory.hpp"
#include "worldtraj/velocimeter.hpp"

namespace worldtraj {

enum class MotionKind { Idle, StraightWalk, CircleWalk, TurnWalk, Run };

std::string_view to_string(MotionKind kind);
MotionKind motion_kind_from_string(std::string_view name);

struct MotionParams {
  double speed = 0.0;          ///< m/s along the path; <= 0 picks 1.2 (walks) or 3.0 (run)
  double heading = 0.0;        ///< initial heading about world z, radians
  Vec3 start = Vec3::Zero();   ///< ground point under the pelvis at frame 0
  double circle_radius = 2.0;  ///< CircleWalk, meters; positive turns left
  double turn_angle = 150.0 * std::numbers::pi / 180.0;  ///< TurnWalk, radians (left positive)
  double turn_duration = 1.0;  ///< TurnWalk, seconds, centered mid-sequence
  double frame_rate = 30.0;
};

/// Procedural 15-joint motion in a z-up world. The body frame is x forward,
/// y left, z up; the root rotation maps body to world.
struct GeneratedMotion {
  MotionKind kind = MotionKind::Idle;
  Trajectory root;                 ///< pelvis poses, metric
  JointSequence joints;            ///< world frame
  std::vector<double> heading;     ///< path heading per frame, radians
};

/// Stance feet stay fixed in the world; knees come from two-bone IK. The
/// seed varies cadence, swing amplitudes and phase, never the path itself.
GeneratedMotion generate_motion(MotionKind kind, const MotionParams& params, std::size_t frames,
                                std::uint64_t seed);

/// Two idle characters facing each other about `center`.
std::vector<GeneratedMotion> generate_interactive_pair(std::size_t frames, const Vec3& center,
                                                       double separation, std::uint64_t seed);

/// Character track for framing; several motions are averaged per frame.
CharacterTrack character_track(std::span<const GeneratedMotion> motions, Anchor anchor);

// ---------------------------------------------------------------- scenes

struct SyntheticScene {
  Trajectory gt_human;          ///< root-to-world, metric
  JointSequence gt_joints_world;
  Trajectory gt_camera;         ///< camera-to-world, first pose identity
  CameraIntrinsics intrinsics;
  std::uint64_t seed = 0;
  MotionKind motion = MotionKind::Idle;
  ComposedShots shots;          ///< camera keyframes in the original z-up world
  /// Maps the original z-up world into the scene world (inverse of the
  /// first camera pose).
  RigidTransform world_from_sim;

  std::size_t size() const { return gt_human.size(); }
  double frame_rate() const { return gt_human.frame_rate; }
};

/// Field of view along the larger image side implied by the intrinsics.
ViewSettings view_from_intrinsics(const CameraIntrinsics& intrinsics);

/// Re-expresses motion and a z-up-world camera path so camera frame 0 is the
/// world. Throws LengthMismatch.
SyntheticScene assemble_scene(const GeneratedMotion& motion, const Trajectory& camera_sim,
                              const CameraIntrinsics& intrinsics, std::uint64_t seed);

enum class CameraPlan { Composed, Single, Static };

inline ShotSpec default_scene_shot() {
  ShotSpec s;
  s.kind = ShotKind::Tracking;
  s.base = {3.5, 0.0, std::numbers::pi / 4.0};
  return s;
}

struct SceneConfig {
  MotionKind motion = MotionKind::StraightWalk;
  MotionParams motion_params;
  std::size_t frames = 300;
  CameraPlan plan = CameraPlan::Single;
  ShotSpec shot = default_scene_shot();
  CompositionPolicy policy;
  Anchor anchor = Anchor::Pelvis;
  CameraIntrinsics intrinsics = CameraIntrinsics::exact(1000.0, 1920, 1080, 256);
  std::uint64_t seed = 0;
  bool check_in_view = true;
  double view_margin = 0.1;  ///< fraction of the image kept clear on each side
};

/// Motion + camera + normalization. The shot view is derived from the
/// intrinsics. Throws SubjectBehindCamera / SubjectOutOfView when
/// check_in_view is set and a frame violates it.
SyntheticScene generate_scene(const SceneConfig& config);

/// All joints inside the image with the margin, depth above 0.2 m.
void check_subject_in_view(const SyntheticScene& scene, double margin);

inline constexpr double kMinSubjectDepth = 0.2;

enum class EhpsMode {
  Exact,       ///< s from the true root depth, offsets exact
  PinholeFit,  ///< s, t_x, t_y fitted to the pinhole projection of the joints
};

/// Observations an ideal estimator would emit. Joint offsets get isotropic
/// Gaussian noise of `joint_noise_sigma` meters. Throws SubjectBehindCamera.
std::vector<WeakPerspectiveObservation> simulate_ehps(const SyntheticScene& scene, double joint_noise_sigma,
                                                      std::uint64_t seed, EhpsMode mode = EhpsMode::Exact);

struct VONoiseModel {
  double scale_factor = 1.0;
  double rotation_noise_sigma = 0.0;     ///< radians
  double translation_noise_sigma = 0.0;  ///< meters, before scaling
  double drift_per_frame = 0.0;          ///< meters, before scaling

  void validate() const;
};

/// Scaleless VO: t_vo = scale_factor * (t + noise + drift), rotations
/// perturbed by small random axis-angles. Frame 0 stays identity.
/// Throws NonIdentityFirstFrame.
Trajectory simulate_vo(const Trajectory& gt_camera, const VONoiseModel& noise, std::uint64_t seed);

/// Root velocities of the ground truth in the canonical frame.
VelocitySequence ground_truth_canonical_velocities(const SyntheticScene& scene);

// ---------------------------------------------------------------- corpus

struct CorpusConfig {
  std::size_t sequences = 800;
  std::size_t frames = 160;
  double joint_noise_sigma = 0.0;  ///< meters, added to canonical joints
  std::uint64_t seed = 0;
};

/// Canonicalized procedural motions of every kind with randomized speed,
/// heading, radius and turn.
std::vector<MotionCorpusEntry> build_motion_corpus(const CorpusConfig& config);

/// Canonical joints and velocities of one motion (frame-0 root orientation).
MotionCorpusEntry corpus_entry_from_motion(const GeneratedMotion& motion, std::string label);

}  // namespace worldtraj
