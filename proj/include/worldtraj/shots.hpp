#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "worldtraj/geometry.hpp"
#include "worldtraj/skeleton.hpp"
#include "worldtraj/trajectory.hpp"

namespace worldtraj {

// Shot generation works in a z-up world. Cameras use the pinhole convention
// x right, y down, z forward (the look direction).

/// Camera placement relative to a character: distance, polar and azimuth
/// offsets added to the character's facing angles.
struct SphericalCameraState {
  double radius = 3.0;
  double theta = 0.0;  ///< wrapped to [0, 2pi)
  double phi = 0.0;    ///< wrapped to [0, 2pi)

  static SphericalCameraState make(double radius, double theta, double phi);
};

enum class Anchor { Neck, Pelvis };

struct CharacterState {
  Vec3 position = Vec3::Zero();
  /// Facing direction as polar/azimuth; an upright character faces along
  /// theta = pi/2, phi = heading.
  double theta_ch = std::numbers::pi / 2.0;
  double phi_ch = 0.0;
  Anchor anchor = Anchor::Pelvis;

  Vec3 facing_direction() const;
};

/// Average location and facing of several characters.
CharacterState average_characters(std::span<const CharacterState> characters);

/// Per-frame character states plus the joints used for framing.
struct CharacterTrack {
  std::vector<CharacterState> states;
  std::vector<JointFrame> joints;  ///< world joints (z-up), one per frame

  std::size_t size() const { return states.size(); }
};

struct ViewSettings {
  double fov = std::numbers::pi / 3.0;  ///< along the larger image side, radians
  double aspect = 16.0 / 9.0;           ///< width / height

  double tan_half_vertical() const;
  double tan_half_horizontal() const;
};

enum class ShotKind { Arc, Push, Pull, Tracking, Pan };
enum class ArcAxis { Horizontal, Vertical };
/// When a tracking/pan shot sets its next keyframe, in terms of the
/// bounding-box overlap with the last keyframe.
enum class OverlapRule {
  BelowThreshold,  ///< overlap < lambda (default)
  AboveThreshold,  ///< overlap > lambda (rule as literally printed)
};

std::string_view to_string(ShotKind kind);
ShotKind shot_kind_from_string(std::string_view name);
std::string_view to_string(OverlapRule rule);

struct Keyframe {
  int frame_index = 0;
  RigidTransform camera_pose;  ///< camera-to-world
  SphericalCameraState relative;  ///< placement relative to the character
  std::optional<double> view_fraction;  ///< requested fraction (push/pull)
};

struct ArcParams {
  ArcAxis axis = ArcAxis::Horizontal;
  double start = 0.0;  ///< phi_c (horizontal) or theta_c (vertical) at the first keyframe
  double end = std::numbers::pi;
  double step = std::numbers::pi / 4.0;  ///< magnitude; direction follows start -> end
};

struct PushPullParams {
  double frac_start = 0.3;
  double frac_end = 0.8;
  double frac_step = 0.1;
  /// Continuous variant: `random_keyframes` fractions drawn uniformly from
  /// [frac_start, frac_end] with the shot seed.
  bool random = false;
  int random_keyframes = 6;
};

struct FollowParams {
  double lambda_overlap = 0.7;
  OverlapRule rule = OverlapRule::BelowThreshold;
};

struct ShotSpec {
  ShotKind kind = ShotKind::Arc;
  ArcParams arc;
  PushPullParams push_pull;
  FollowParams follow;
  /// Starting placement; arc/push/pull override the swept coordinate.
  SphericalCameraState base{3.0, 0.0, 0.0};
  ViewSettings view;
  int keyframe_spacing = 15;  ///< frames between keyframes for arc/push/pull
  int start_frame = 0;
  std::uint64_t seed = 0;

  /// Throws EmptyRange / InvalidFraction / InvalidArgument.
  void validate() const;
};

/// Camera pose from the character-relative spherical placement. The camera
/// looks at the character; when the view is parallel to world z the up
/// vector falls back to world +x.
RigidTransform spherical_to_world(const CharacterState& character, const SphericalCameraState& cam);

/// Look-at rotation with world z up (+x fallback when degenerate).
Rotation3 look_at_rotation(const Vec3& eye, const Vec3& target);

/// Spherical placement of a camera position relative to a character.
SphericalCameraState relative_spherical(const CharacterState& character, const Vec3& camera_position);

/// Distance at which a subject of camera-space height `h_bbox` occupies
/// `frac` of the normalized half-view: h / (frac tan(fov/2)), times aspect
/// when aspect > 1. Throws InvalidFraction / InvalidFov.
double radius_for_fraction(double h_bbox, double frac, double fov, double aspect);

std::vector<Keyframe> generate_arc_shot(const CharacterTrack& track, const ShotSpec& spec);
std::vector<Keyframe> generate_push_shot(const CharacterTrack& track, const ShotSpec& spec);
std::vector<Keyframe> generate_pull_shot(const CharacterTrack& track, const ShotSpec& spec);
std::vector<Keyframe> generate_tracking_shot(const CharacterTrack& track, const ShotSpec& spec);
std::vector<Keyframe> generate_pan_shot(const CharacterTrack& track, const ShotSpec& spec);
std::vector<Keyframe> generate_shot(const CharacterTrack& track, const ShotSpec& spec);

/// Per-frame poses: linear positions, slerped rotations, held constant
/// outside the keyframe span.
std::vector<RigidTransform> interpolate_keyframes(std::span<const Keyframe> keyframes, std::size_t total_frames);

// ---------------------------------------------------------------- framing

struct BoundingBox2 {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();
  bool valid = false;

  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }
};

/// Normalized image coordinates (view spans [-1, 1] on both axes).
std::optional<Vec2> project_to_view(const RigidTransform& camera, const ViewSettings& view, const Vec3& world);
BoundingBox2 projected_bbox(const RigidTransform& camera, const ViewSettings& view, const JointFrame& joints);
double bbox_iou(const BoundingBox2& a, const BoundingBox2& b);
/// Projected bbox height over the full view height.
double view_fraction(const RigidTransform& camera, const ViewSettings& view, const JointFrame& joints);
/// Extent of the joints along the camera's vertical axis, meters.
double camera_space_height(const Rotation3& camera_rotation, const JointFrame& joints);

// ---------------------------------------------------------------- composition

struct CompositionPolicy {
  double lambda_bbox = 0.5;                       ///< meters
  double lambda_angle = std::numbers::pi / 4.0;   ///< radians
  double lambda_overlap = 0.7;
  OverlapRule overlap_rule = OverlapRule::BelowThreshold;
  ViewSettings view;
  SphericalCameraState base{3.5, 0.0, std::numbers::pi / 4.0};
  int keyframe_spacing = 15;
  int segment_frames = 60;  ///< static scenes: frames per arc/push/pull segment
  bool interactive = false;  ///< multi-character motion: treat as static
  std::uint64_t seed = 0;
};

struct ShotSegment {
  ShotKind kind = ShotKind::Arc;
  std::optional<ArcAxis> arc_axis;
  int first_frame = 0;
  int last_frame = 0;
  std::vector<Keyframe> keyframes;
  std::map<std::string, double> parameters;
};

struct ComposedShots {
  Trajectory camera;  ///< per-frame camera-to-world, z-up world
  std::vector<ShotSegment> segments;
  std::vector<Keyframe> keyframes;
  bool static_motion = false;
  double bbox_longest_edge = 0.0;
  OverlapRule overlap_rule = OverlapRule::BelowThreshold;
};

/// Longest edge of the axis-aligned box around all character positions.
double character_bbox_longest_edge(const CharacterTrack& track);

/// Static or interactive motion gets arcs mixed with random push/pull;
/// travelling motion gets tracking, switching to pan while the facing
/// rotates faster than lambda_angle between keyframes.
ComposedShots compose_shots(const CharacterTrack& track, const CompositionPolicy& policy);

/// Camera path for a single shot kind over the whole track.
ComposedShots single_shot(const CharacterTrack& track, const ShotSpec& spec);

}  // namespace worldtraj
