#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "worldtraj/depth.hpp"
#include "worldtraj/fusion.hpp"
#include "worldtraj/metrics.hpp"
#include "worldtraj/shots.hpp"
#include "worldtraj/simulator.hpp"
#include "worldtraj/skeleton.hpp"
#include "worldtraj/trajectory.hpp"
#include "worldtraj/velocimeter.hpp"

// File formats; docs/formats.md has the byte-level description. Every
// reader rejects unknown versions with UnsupportedVersion and malformed
// content with Io.

namespace worldtraj::io {

using nlohmann::json;
namespace fs = std::filesystem;

inline constexpr int kTrajVersion = 1;
inline constexpr int kJsqVersion = 1;
inline constexpr int kObsVersion = 1;
inline constexpr int kBundleVersion = 1;

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

// .traj: JSON lines, header then one pose per line.
std::string traj_to_string(const Trajectory& traj);
Trajectory traj_from_string(const std::string& text);
void write_traj(const fs::path& path, const Trajectory& traj);
Trajectory read_traj(const fs::path& path);

// .jsq: little-endian binary plus `<path>.json` sidecar.
std::vector<std::uint8_t> jsq_to_bytes(const JointSequence& seq);
JointSequence jsq_from_bytes(const std::vector<std::uint8_t>& bytes, CoordinateFrame frame, double frame_rate);
json jsq_sidecar(const JointSequence& seq);
void write_jsq(const fs::path& path, const JointSequence& seq, const json& extra_sidecar = json::object());
JointSequence read_jsq(const fs::path& path, json* sidecar_out = nullptr);
fs::path sidecar_path(const fs::path& jsq_path);

// .obs: JSON lines, header then one observation per line.
std::string obs_to_string(const std::vector<WeakPerspectiveObservation>& obs, double frame_rate);
std::vector<WeakPerspectiveObservation> obs_from_string(const std::string& text, double* frame_rate_out = nullptr);
void write_obs(const fs::path& path, const std::vector<WeakPerspectiveObservation>& obs, double frame_rate);
std::vector<WeakPerspectiveObservation> read_obs(const fs::path& path, double* frame_rate_out = nullptr);

json intrinsics_to_json(const CameraIntrinsics& k);
CameraIntrinsics intrinsics_from_json(const json& j);

json shots_to_json(const ComposedShots& shots);
json diagnostics_to_json(const PipelineResult& result);
json report_to_json(const SegmentReport& report);
/// Header line, one `sequence` row, then one `segment` row per segment.
std::string report_to_csv(const SegmentReport& report, const std::string& sequence_name);

// Scene bundle directory: scene.json, gt_human.traj, gt_camera.traj,
// joints.jsq (+ sidecar), observations.obs, vo.traj, shot_manifest.json.
struct SceneBundle {
  json metadata;
  Trajectory gt_human;
  Trajectory gt_camera;
  JointSequence gt_joints_world;
  CameraIntrinsics intrinsics;
  std::vector<WeakPerspectiveObservation> observations;
  Trajectory vo;
  json shot_manifest;
};

void write_scene_bundle(const fs::path& dir, const SyntheticScene& scene,
                        const std::vector<WeakPerspectiveObservation>& observations, const Trajectory& vo,
                        const json& extra_metadata = json::object());
SceneBundle read_scene_bundle(const fs::path& dir);

// Velocimeter corpus: one .jsq per entry, sidecar carries label and velocities.
void write_corpus(const fs::path& dir, const std::vector<MotionCorpusEntry>& entries);
std::vector<MotionCorpusEntry> read_corpus(const fs::path& dir);

/// frame,x,y,z,qx,qy,qz,qw
std::string traj_to_csv(const Trajectory& traj);
Trajectory traj_from_csv(const std::string& text, ScaleStatus status = ScaleStatus::Metric, double frame_rate = 30.0);
/// Side-by-side columns `<name>_x` ... for overlay plots; rows padded to the
/// longest trajectory with empty cells.
std::string overlay_csv(const std::vector<Trajectory>& trajs, const std::vector<std::string>& names);

/// FNV-1a of a file's bytes, for determinism checks.
std::uint64_t file_checksum(const fs::path& path);

}  // namespace worldtraj::io
