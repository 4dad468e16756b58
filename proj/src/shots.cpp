#include "worldtraj/shots.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "worldtraj/errors.hpp"
#include "worldtraj/rng.hpp"

namespace worldtraj {

namespace {

constexpr double kPi = std::numbers::pi;

// Signed angle in (-pi, pi].
double wrap_signed(double a) {
  double w = wrap_two_pi(a);
  return w > kPi ? w - 2.0 * kPi : w;
}

int sweep_count(double start, double end, double step) {
  return static_cast<int>(std::floor(std::abs(end - start) / step + 1e-9)) + 1;
}

std::size_t clamp_frame(int frame, std::size_t size) {
  if (frame < 0) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(frame), size - 1);
}

void require_track(const CharacterTrack& track) {
  if (track.states.empty()) fail(ErrorKind::InvalidArgument, "character track is empty");
  if (track.joints.size() != track.states.size()) {
    fail(ErrorKind::LengthMismatch, "character track states and joints differ in length");
  }
}

bool overlap_triggers(double iou, const FollowParams& follow) {
  return follow.rule == OverlapRule::BelowThreshold ? iou < follow.lambda_overlap
                                                    : iou > follow.lambda_overlap;
}

Keyframe make_keyframe(const CharacterTrack& track, int frame, const SphericalCameraState& rel) {
  const auto& ch = track.states[clamp_frame(frame, track.size())];
  return {frame, spherical_to_world(ch, rel), rel, std::nullopt};
}

// Push/pull keyframes for an explicit fraction list.
std::vector<Keyframe> fraction_keyframes(const CharacterTrack& track, const ShotSpec& spec,
                                         const std::vector<double>& fractions) {
  std::vector<Keyframe> out;
  out.reserve(fractions.size());
  for (std::size_t k = 0; k < fractions.size(); ++k) {
    const int frame = spec.start_frame + static_cast<int>(k) * spec.keyframe_spacing;
    const std::size_t f = clamp_frame(frame, track.size());
    SphericalCameraState rel = spec.base;
    // Orientation does not depend on the radius, so measure the subject first.
    rel.radius = 1.0;
    const Rotation3 rot = spherical_to_world(track.states[f], rel).rotation;
    const double h = camera_space_height(rot, track.joints[f]);
    // The look-at anchor sits at the view center, so half the subject height
    // spans the half-view that radius_for_fraction is defined over.
    rel.radius = radius_for_fraction(0.5 * h, fractions[k], spec.view.fov, spec.view.aspect);
    Keyframe kf = make_keyframe(track, frame, rel);
    kf.view_fraction = fractions[k];
    out.push_back(kf);
  }
  return out;
}

std::vector<double> push_fractions(const ShotSpec& spec) {
  const auto& p = spec.push_pull;
  std::vector<double> fr;
  if (p.random) {
    if (p.random_keyframes < 1) fail(ErrorKind::InvalidArgument, "random push/pull needs keyframes");
    auto gen = SplitRng(spec.seed).stream("push-pull");
    std::uniform_real_distribution<double> u(std::min(p.frac_start, p.frac_end),
                                             std::max(p.frac_start, p.frac_end));
    for (int i = 0; i < p.random_keyframes; ++i) fr.push_back(u(gen));
    std::sort(fr.begin(), fr.end());
    return fr;
  }
  const int n = sweep_count(p.frac_start, p.frac_end, p.frac_step);
  const double lo = std::min(p.frac_start, p.frac_end);
  for (int i = 0; i < n; ++i) fr.push_back(lo + i * p.frac_step);
  return fr;
}

// Follow the character from `first`; `fixed_position` turns it into a pan.
std::vector<Keyframe> follow_keyframes(const CharacterTrack& track, const ShotSpec& spec,
                                       const std::optional<Vec3>& fixed_position) {
  require_track(track);
  const std::size_t start = clamp_frame(spec.start_frame, track.size());
  auto place = [&](std::size_t f) -> Keyframe {
    const auto& ch = track.states[f];
    if (!fixed_position) return {static_cast<int>(f), spherical_to_world(ch, spec.base), spec.base, std::nullopt};
    RigidTransform pose{look_at_rotation(*fixed_position, ch.position), *fixed_position};
    return {static_cast<int>(f), pose, relative_spherical(ch, *fixed_position), std::nullopt};
  };
  std::vector<Keyframe> out{place(start)};
  BoundingBox2 key_box = projected_bbox(out.back().camera_pose, spec.view, track.joints[start]);
  for (std::size_t f = start + 1; f < track.size(); ++f) {
    const BoundingBox2 box = projected_bbox(out.back().camera_pose, spec.view, track.joints[f]);
    if (!overlap_triggers(bbox_iou(key_box, box), spec.follow)) continue;
    out.push_back(place(f));
    key_box = projected_bbox(out.back().camera_pose, spec.view, track.joints[f]);
  }
  return out;
}

}  // namespace

SphericalCameraState SphericalCameraState::make(double radius, double theta, double phi) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::InvalidArgument, "camera radius must be positive");
  return {radius, wrap_two_pi(theta), wrap_two_pi(phi)};
}

Vec3 CharacterState::facing_direction() const {
  return {std::sin(theta_ch) * std::cos(phi_ch), std::sin(theta_ch) * std::sin(phi_ch), std::cos(theta_ch)};
}

CharacterState average_characters(std::span<const CharacterState> characters) {
  if (characters.empty()) fail(ErrorKind::InvalidArgument, "no characters to average");
  CharacterState out = characters.front();
  Vec3 pos = Vec3::Zero();
  Vec3 facing = Vec3::Zero();
  for (const auto& c : characters) {
    pos += c.position;
    facing += c.facing_direction();
  }
  out.position = pos / static_cast<double>(characters.size());
  // Opposed facings cancel; keep the first character's facing then.
  if (facing.norm() > 1e-9) {
    facing.normalize();
    out.theta_ch = std::acos(std::clamp(facing.z(), -1.0, 1.0));
    out.phi_ch = wrap_two_pi(std::atan2(facing.y(), facing.x()));
  }
  return out;
}

double ViewSettings::tan_half_vertical() const {
  const double t = std::tan(0.5 * fov);
  return aspect >= 1.0 ? t / aspect : t;
}

double ViewSettings::tan_half_horizontal() const {
  const double t = std::tan(0.5 * fov);
  return aspect >= 1.0 ? t : t * aspect;
}

std::string_view to_string(ShotKind kind) {
  switch (kind) {
    case ShotKind::Arc: return "arc";
    case ShotKind::Push: return "push";
    case ShotKind::Pull: return "pull";
    case ShotKind::Tracking: return "tracking";
    case ShotKind::Pan: return "pan";
  }
  return "unknown";
}

ShotKind shot_kind_from_string(std::string_view name) {
  for (ShotKind k : {ShotKind::Arc, ShotKind::Push, ShotKind::Pull, ShotKind::Tracking, ShotKind::Pan}) {
    if (to_string(k) == name) return k;
  }
  fail(ErrorKind::InvalidArgument, "unknown shot kind '" + std::string(name) + "'");
}

std::string_view to_string(OverlapRule rule) {
  return rule == OverlapRule::BelowThreshold ? "overlap-below-threshold" : "overlap-above-threshold";
}

void ShotSpec::validate() const {
  if (!(base.radius > 0.0)) fail(ErrorKind::InvalidArgument, "camera radius must be positive");
  if (!(view.fov > 0.0 && view.fov < kPi)) fail(ErrorKind::InvalidFov, "fov must lie in (0, pi)");
  if (!(view.aspect > 0.0)) fail(ErrorKind::InvalidArgument, "aspect must be positive");
  if (keyframe_spacing < 1) fail(ErrorKind::InvalidArgument, "keyframe spacing must be at least 1");
  switch (kind) {
    case ShotKind::Arc:
      if (!(arc.step > 0.0) || !std::isfinite(arc.step) || !(std::abs(arc.end - arc.start) > 0.0)) {
        fail(ErrorKind::EmptyRange, "arc range is empty");
      }
      break;
    case ShotKind::Push:
    case ShotKind::Pull: {
      const auto& p = push_pull;
      for (double f : {p.frac_start, p.frac_end}) {
        if (!(f > 0.0 && f <= 1.0)) fail(ErrorKind::InvalidFraction, "view fraction must lie in (0, 1]");
      }
      if (!p.random && (!(p.frac_step > 0.0) || p.frac_start == p.frac_end)) {
        fail(ErrorKind::EmptyRange, "fraction range is empty");
      }
      break;
    }
    case ShotKind::Tracking:
    case ShotKind::Pan:
      if (!(follow.lambda_overlap > 0.0 && follow.lambda_overlap < 1.0)) {
        fail(ErrorKind::InvalidArgument, "lambda_overlap must lie in (0, 1)");
      }
      break;
  }
}

Rotation3 look_at_rotation(const Vec3& eye, const Vec3& target) {
  const Vec3 d = target - eye;
  if (!(d.norm() > 0.0)) fail(ErrorKind::InvalidArgument, "look-at eye and target coincide");
  const Vec3 forward = d.normalized();
  Vec3 right = forward.cross(Vec3::UnitZ());
  if (right.norm() < 1e-9) right = forward.cross(Vec3::UnitX());
  right.normalize();
  const Vec3 down = forward.cross(right);
  Mat3 m;
  m.col(0) = right;
  m.col(1) = down;
  m.col(2) = forward;
  return Rotation3::nearest(m);
}

RigidTransform spherical_to_world(const CharacterState& character, const SphericalCameraState& cam) {
  if (!(cam.radius > 0.0)) fail(ErrorKind::InvalidArgument, "camera radius must be positive");
  const double theta = wrap_two_pi(cam.theta + character.theta_ch);
  const double phi = wrap_two_pi(cam.phi + character.phi_ch);
  const Vec3 dir(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
  const Vec3 eye = character.position + cam.radius * dir;
  return {look_at_rotation(eye, character.position), eye};
}

SphericalCameraState relative_spherical(const CharacterState& character, const Vec3& camera_position) {
  const Vec3 d = camera_position - character.position;
  const double r = d.norm();
  if (!(r > 0.0)) fail(ErrorKind::InvalidArgument, "camera coincides with the character");
  const double theta = std::acos(std::clamp(d.z() / r, -1.0, 1.0));
  const double phi = std::atan2(d.y(), d.x());
  return SphericalCameraState::make(r, theta - character.theta_ch, phi - character.phi_ch);
}

double radius_for_fraction(double h_bbox, double frac, double fov, double aspect) {
  if (!(frac > 0.0 && frac <= 1.0)) fail(ErrorKind::InvalidFraction, "view fraction must lie in (0, 1]");
  if (!(fov > 0.0 && fov < kPi)) fail(ErrorKind::InvalidFov, "fov must lie in (0, pi)");
  if (!(h_bbox > 0.0)) fail(ErrorKind::InvalidArgument, "bbox height must be positive");
  if (!(aspect > 0.0)) fail(ErrorKind::InvalidArgument, "aspect must be positive");
  double r = h_bbox / (frac * std::tan(0.5 * fov));
  if (aspect > 1.0) r *= aspect;
  return r;
}

std::vector<Keyframe> generate_arc_shot(const CharacterTrack& track, const ShotSpec& spec) {
  spec.validate();
  require_track(track);
  const auto& a = spec.arc;
  const int n = sweep_count(a.start, a.end, a.step);
  const double dir = a.end >= a.start ? 1.0 : -1.0;
  std::vector<Keyframe> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double v = a.start + dir * k * a.step;
    SphericalCameraState rel = spec.base;
    if (a.axis == ArcAxis::Horizontal) {
      rel.phi = wrap_two_pi(v);
    } else {
      rel.theta = wrap_two_pi(v);
    }
    out.push_back(make_keyframe(track, spec.start_frame + k * spec.keyframe_spacing, rel));
  }
  return out;
}

std::vector<Keyframe> generate_push_shot(const CharacterTrack& track, const ShotSpec& spec) {
  spec.validate();
  require_track(track);
  return fraction_keyframes(track, spec, push_fractions(spec));
}

std::vector<Keyframe> generate_pull_shot(const CharacterTrack& track, const ShotSpec& spec) {
  spec.validate();
  require_track(track);
  std::vector<double> fr = push_fractions(spec);
  std::reverse(fr.begin(), fr.end());
  return fraction_keyframes(track, spec, fr);
}

std::vector<Keyframe> generate_tracking_shot(const CharacterTrack& track, const ShotSpec& spec) {
  spec.validate();
  return follow_keyframes(track, spec, std::nullopt);
}

std::vector<Keyframe> generate_pan_shot(const CharacterTrack& track, const ShotSpec& spec) {
  spec.validate();
  require_track(track);
  const std::size_t start = clamp_frame(spec.start_frame, track.size());
  return follow_keyframes(track, spec, spherical_to_world(track.states[start], spec.base).translation);
}

std::vector<Keyframe> generate_shot(const CharacterTrack& track, const ShotSpec& spec) {
  switch (spec.kind) {
    case ShotKind::Arc: return generate_arc_shot(track, spec);
    case ShotKind::Push: return generate_push_shot(track, spec);
    case ShotKind::Pull: return generate_pull_shot(track, spec);
    case ShotKind::Tracking: return generate_tracking_shot(track, spec);
    case ShotKind::Pan: return generate_pan_shot(track, spec);
  }
  fail(ErrorKind::InvalidArgument, "unknown shot kind");
}

std::vector<RigidTransform> interpolate_keyframes(std::span<const Keyframe> keyframes, std::size_t total_frames) {
  if (keyframes.empty()) fail(ErrorKind::InvalidArgument, "interpolation needs at least one keyframe");
  for (std::size_t i = 1; i < keyframes.size(); ++i) {
    if (keyframes[i].frame_index <= keyframes[i - 1].frame_index) {
      fail(ErrorKind::InvalidArgument, "keyframe indices must be strictly increasing");
    }
  }
  std::vector<RigidTransform> out(total_frames);
  std::size_t k = 0;
  for (std::size_t f = 0; f < total_frames; ++f) {
    const int fi = static_cast<int>(f);
    while (k + 1 < keyframes.size() && keyframes[k + 1].frame_index <= fi) ++k;
    const Keyframe& a = keyframes[k];
    if (fi <= a.frame_index || k + 1 == keyframes.size()) {
      out[f] = a.camera_pose;
      continue;
    }
    const Keyframe& b = keyframes[k + 1];
    const double t = static_cast<double>(fi - a.frame_index) / (b.frame_index - a.frame_index);
    out[f].translation = (1.0 - t) * a.camera_pose.translation + t * b.camera_pose.translation;
    out[f].rotation = slerp(a.camera_pose.rotation, b.camera_pose.rotation, t);
  }
  return out;
}

std::optional<Vec2> project_to_view(const RigidTransform& camera, const ViewSettings& view, const Vec3& world) {
  const Vec3 p = camera.rotation.inverse() * (world - camera.translation);
  if (p.z() <= 1e-6) return std::nullopt;
  return Vec2(p.x() / p.z() / view.tan_half_horizontal(), p.y() / p.z() / view.tan_half_vertical());
}

BoundingBox2 projected_bbox(const RigidTransform& camera, const ViewSettings& view, const JointFrame& joints) {
  BoundingBox2 box;
  box.min = Vec2::Constant(std::numeric_limits<double>::infinity());
  box.max = -box.min;
  for (const Vec3& j : joints) {
    const auto p = project_to_view(camera, view, j);
    if (!p) return {};
    box.min = box.min.cwiseMin(*p);
    box.max = box.max.cwiseMax(*p);
  }
  box.valid = true;
  return box;
}

double bbox_iou(const BoundingBox2& a, const BoundingBox2& b) {
  if (!a.valid || !b.valid) return 0.0;
  const Vec2 lo = a.min.cwiseMax(b.min);
  const Vec2 hi = a.max.cwiseMin(b.max);
  const double inter = std::max(0.0, hi.x() - lo.x()) * std::max(0.0, hi.y() - lo.y());
  const double uni = a.width() * a.height() + b.width() * b.height() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

double view_fraction(const RigidTransform& camera, const ViewSettings& view, const JointFrame& joints) {
  const BoundingBox2 box = projected_bbox(camera, view, joints);
  return box.valid ? 0.5 * box.height() : 0.0;
}

double camera_space_height(const Rotation3& camera_rotation, const JointFrame& joints) {
  const Rotation3 inv = camera_rotation.inverse();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Vec3& j : joints) {
    const double y = (inv * j).y();
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  return hi - lo;
}

double character_bbox_longest_edge(const CharacterTrack& track) {
  require_track(track);
  Vec3 lo = track.states.front().position;
  Vec3 hi = lo;
  for (const auto& s : track.states) {
    lo = lo.cwiseMin(s.position);
    hi = hi.cwiseMax(s.position);
  }
  return (hi - lo).maxCoeff();
}

namespace {

void append_keyframes(ComposedShots& out, ShotSegment seg) {
  // Segments chain: a segment's opening keyframe repeats the previous close.
  if (!out.keyframes.empty() && !seg.keyframes.empty() &&
      seg.keyframes.front().frame_index <= out.keyframes.back().frame_index) {
    seg.keyframes.erase(seg.keyframes.begin());
  }
  if (seg.keyframes.empty()) return;
  seg.first_frame = out.keyframes.empty() ? 0 : out.keyframes.back().frame_index;
  seg.last_frame = seg.keyframes.back().frame_index;
  out.keyframes.insert(out.keyframes.end(), seg.keyframes.begin(), seg.keyframes.end());
  out.segments.push_back(std::move(seg));
}

void compose_static(const CharacterTrack& track, const CompositionPolicy& policy, ComposedShots& out) {
  const int k_total = static_cast<int>(track.size());
  auto gen = SplitRng(policy.seed).stream("compose-static");
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  SphericalCameraState rel = policy.base;
  int cursor = 0;
  out.keyframes.push_back(make_keyframe(track, 0, rel));
  while (true) {
    const int len = std::min(policy.segment_frames, k_total - 1 - cursor);
    const int steps = len / policy.keyframe_spacing;
    if (steps < 1) break;
    ShotSpec spec;
    spec.base = rel;
    spec.view = policy.view;
    spec.keyframe_spacing = policy.keyframe_spacing;
    spec.start_frame = cursor;
    spec.seed = SplitRng(policy.seed).derive("segment", static_cast<std::uint64_t>(cursor));
    ShotSegment seg;
    int choice = pick(gen);
    if (choice == 1) {
      // Vertical arc towards a random polar offset, from eye level up to ~35 degrees above.
      const double start = wrap_signed(rel.theta);
      const double end = -0.6 + 0.75 * unit(gen);
      if (std::abs(end - start) < 1e-3 * steps) choice = 0;
      else {
        spec.kind = ShotKind::Arc;
        spec.arc = {ArcAxis::Vertical, start, end, std::abs(end - start) / steps};
        seg.arc_axis = ArcAxis::Vertical;
        seg.parameters = {{"theta_start", start}, {"theta_end", end}, {"step", spec.arc.step}};
      }
    }
    if (choice == 2 || choice == 3) {
      const std::size_t f = static_cast<std::size_t>(cursor);
      const RigidTransform cur = spherical_to_world(track.states[f], rel);
      const double now = std::clamp(view_fraction(cur, policy.view, track.joints[f]), 0.05, 0.95);
      bool push = choice == 2;
      if (push && now > 0.75) push = false;
      if (!push && now < 0.3) push = true;
      const double target = push ? std::max(now + 0.05, 0.3 + 0.5 * unit(gen)) : std::min(now - 0.05, 0.2 + 0.4 * unit(gen));
      std::vector<double> fr;
      for (int i = 0; i <= steps; ++i) fr.push_back(now + (target - now) * i / steps);
      spec.kind = push ? ShotKind::Push : ShotKind::Pull;
      seg.keyframes = fraction_keyframes(track, spec, fr);
      seg.parameters = {{"frac_start", now}, {"frac_end", target}};
    }
    if (choice == 0) {
      const double start = wrap_signed(rel.phi);
      const double step = (kPi / 8.0) * (1.0 + unit(gen));
      const double sign = unit(gen) < 0.5 ? -1.0 : 1.0;
      spec.kind = ShotKind::Arc;
      spec.arc = {ArcAxis::Horizontal, start, start + sign * step * steps, step};
      seg.arc_axis = ArcAxis::Horizontal;
      seg.parameters = {{"phi_start", start}, {"phi_end", spec.arc.end}, {"step", step}};
    }
    seg.kind = spec.kind;
    if (seg.keyframes.empty()) seg.keyframes = generate_arc_shot(track, spec);
    seg.parameters["keyframe_spacing"] = policy.keyframe_spacing;
    append_keyframes(out, std::move(seg));
    rel = out.keyframes.back().relative;
    cursor = out.keyframes.back().frame_index;
  }
  if (out.segments.empty()) {
    // Too short for a sweep: a single held keyframe.
    ShotSegment seg;
    seg.kind = ShotKind::Arc;
    seg.arc_axis = ArcAxis::Horizontal;
    seg.keyframes = out.keyframes;
    out.segments.push_back(seg);
  }
}

void compose_travelling(const CharacterTrack& track, const CompositionPolicy& policy, ComposedShots& out) {
  FollowParams follow{policy.lambda_overlap, policy.overlap_rule};
  SphericalCameraState rel = policy.base;
  std::vector<Keyframe> keys{make_keyframe(track, 0, rel)};
  std::vector<ShotKind> kinds{ShotKind::Tracking};
  BoundingBox2 key_box = projected_bbox(keys.back().camera_pose, policy.view, track.joints[0]);
  // Keyframe whose facing the tracking placement was set at. Overlap
  // keyframes come every few frames, so comparing against the previous one
  // alone would never see a gradual turn.
  std::size_t anchor = 0;
  for (std::size_t f = 1; f < track.size(); ++f) {
    const BoundingBox2 box = projected_bbox(keys.back().camera_pose, policy.view, track.joints[f]);
    if (!overlap_triggers(bbox_iou(key_box, box), follow)) continue;
    const auto& ch = track.states[f];
    const std::size_t reference =
        kinds.back() == ShotKind::Pan ? static_cast<std::size_t>(keys.back().frame_index) : anchor;
    const double turn = std::acos(std::clamp(
        track.states[reference].facing_direction().dot(ch.facing_direction()), -1.0, 1.0));
    Keyframe kf;
    kf.frame_index = static_cast<int>(f);
    if (turn < policy.lambda_angle) {
      // Coming out of a pan, track from wherever the camera now is.
      if (kinds.back() == ShotKind::Pan) {
        rel = relative_spherical(ch, keys.back().camera_pose.translation);
        anchor = f;
      }
      kf.relative = rel;
      kf.camera_pose = spherical_to_world(ch, rel);
      kinds.push_back(ShotKind::Tracking);
    } else {
      const Vec3 eye = keys.back().camera_pose.translation;
      kf.camera_pose = {look_at_rotation(eye, ch.position), eye};
      kf.relative = relative_spherical(ch, eye);
      kinds.push_back(ShotKind::Pan);
    }
    keys.push_back(kf);
    key_box = projected_bbox(kf.camera_pose, policy.view, track.joints[f]);
  }
  // Group runs of equal kind; each run opens at the previous keyframe.
  std::size_t i = 0;
  while (i < keys.size()) {
    std::size_t j = i;
    while (j + 1 < keys.size() && kinds[j + 1] == kinds[i]) ++j;
    ShotSegment seg;
    seg.kind = kinds[i];
    seg.keyframes.assign(keys.begin() + static_cast<std::ptrdiff_t>(i), keys.begin() + static_cast<std::ptrdiff_t>(j + 1));
    seg.parameters = {{"lambda_overlap", policy.lambda_overlap}, {"lambda_angle", policy.lambda_angle}};
    append_keyframes(out, std::move(seg));
    i = j + 1;
  }
}

ComposedShots finish(const CharacterTrack& track, ComposedShots out) {
  out.camera.scale_status = ScaleStatus::Metric;
  out.camera.poses = interpolate_keyframes(out.keyframes, track.size());
  if (!out.segments.empty()) out.segments.back().last_frame = static_cast<int>(track.size()) - 1;
  for (std::size_t s = 0; s + 1 < out.segments.size(); ++s) {
    out.segments[s].last_frame = out.segments[s + 1].first_frame;
  }
  return out;
}

}  // namespace

ComposedShots compose_shots(const CharacterTrack& track, const CompositionPolicy& policy) {
  require_track(track);
  if (policy.keyframe_spacing < 1 || policy.segment_frames < 1) {
    fail(ErrorKind::InvalidArgument, "keyframe spacing and segment length must be positive");
  }
  if (!(policy.lambda_overlap > 0.0 && policy.lambda_overlap < 1.0)) {
    fail(ErrorKind::InvalidArgument, "lambda_overlap must lie in (0, 1)");
  }
  ComposedShots out;
  out.overlap_rule = policy.overlap_rule;
  out.bbox_longest_edge = character_bbox_longest_edge(track);
  out.static_motion = policy.interactive || out.bbox_longest_edge < policy.lambda_bbox;
  if (out.static_motion) {
    compose_static(track, policy, out);
  } else {
    compose_travelling(track, policy, out);
  }
  return finish(track, std::move(out));
}

ComposedShots single_shot(const CharacterTrack& track, const ShotSpec& spec) {
  ComposedShots out;
  out.overlap_rule = spec.follow.rule;
  out.bbox_longest_edge = character_bbox_longest_edge(track);
  ShotSegment seg;
  seg.kind = spec.kind;
  if (spec.kind == ShotKind::Arc) seg.arc_axis = spec.arc.axis;
  seg.keyframes = generate_shot(track, spec);
  switch (spec.kind) {
    case ShotKind::Arc:
      seg.parameters = {{"start", spec.arc.start}, {"end", spec.arc.end}, {"step", spec.arc.step}};
      break;
    case ShotKind::Push:
    case ShotKind::Pull:
      seg.parameters = {{"frac_start", spec.push_pull.frac_start},
                        {"frac_end", spec.push_pull.frac_end},
                        {"frac_step", spec.push_pull.frac_step}};
      break;
    case ShotKind::Tracking:
    case ShotKind::Pan:
      seg.parameters = {{"lambda_overlap", spec.follow.lambda_overlap}};
      break;
  }
  seg.parameters["radius"] = spec.base.radius;
  seg.parameters["theta"] = spec.base.theta;
  seg.parameters["phi"] = spec.base.phi;
  seg.parameters["keyframe_spacing"] = spec.keyframe_spacing;
  out.keyframes = seg.keyframes;
  seg.first_frame = seg.keyframes.front().frame_index;
  out.segments.push_back(std::move(seg));
  return finish(track, std::move(out));
}

}  // namespace worldtraj
