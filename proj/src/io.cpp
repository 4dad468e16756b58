#include "worldtraj/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "worldtraj/errors.hpp"

namespace worldtraj::io {

namespace {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

constexpr char kJsqMagic[4] = {'J', 'S', 'E', 'Q'};

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) fail(ErrorKind::Io, std::string("expected 3-vector for ") + what);
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json parse_line(const std::string& line, std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "line " + std::to_string(lineno) + ": " + e.what());
  }
}

std::vector<json> parse_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_line(line, n));
  }
  if (out.empty()) fail(ErrorKind::Io, "empty file");
  return out;
}

void check_header(const json& h, std::string_view format, int version) {
  if (!h.is_object() || h.value("format", "") != format) {
    fail(ErrorKind::Io, "missing " + std::string(format) + " header");
  }
  const int v = h.value("version", -1);
  if (v != version) {
    throw Error(ErrorKind::UnsupportedVersion,
                std::string(format) + " version " + std::to_string(v) + " is not supported (expected " +
                    std::to_string(version) + ")");
  }
}

template <typename T>
void put(std::vector<std::uint8_t>& out, T v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T take(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) fail(ErrorKind::Io, "truncated joint sequence");
  T v;
  std::memcpy(&v, in.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) fail(ErrorKind::Io, "write failed for " + path.string());
}

std::string fmt_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::Io, "cannot write " + path.string());
  f << text;
  if (!f) fail(ErrorKind::Io, "write failed for " + path.string());
}

// ---------------------------------------------------------------- traj

std::string traj_to_string(const Trajectory& traj) {
  std::string out = json{{"format", "traj"},
                         {"version", kTrajVersion},
                         {"scale_status", std::string(to_string(traj.scale_status))},
                         {"frame_rate", traj.frame_rate},
                         {"frames", traj.size()}}
                        .dump();
  out += '\n';
  for (std::size_t i = 0; i < traj.size(); ++i) {
    out += json{{"frame", i},
                {"translation", vec_json(traj[i].translation)},
                {"rotation", vec_json(traj[i].rotation.to_axis_angle())}}
               .dump();
    out += '\n';
  }
  return out;
}

Trajectory traj_from_string(const std::string& text) {
  const std::vector<json> lines = parse_lines(text);
  const json& h = lines.front();
  check_header(h, "traj", kTrajVersion);
  Trajectory out;
  try {
    out.scale_status = scale_status_from_string(h.at("scale_status").get<std::string>());
    out.frame_rate = h.at("frame_rate").get<double>();
    const auto frames = h.at("frames").get<std::size_t>();
    if (lines.size() - 1 != frames) fail(ErrorKind::Io, "traj header promises " + std::to_string(frames) + " frames");
    out.poses.reserve(frames);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const json& l = lines[i];
      if (l.at("frame").get<std::size_t>() != i - 1) fail(ErrorKind::Io, "traj frames out of order");
      out.poses.push_back({Rotation3::from_axis_angle(vec_from(l.at("rotation"), "rotation")),
                           vec_from(l.at("translation"), "translation")});
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, std::string("malformed traj: ") + e.what());
  }
  return out;
}

void write_traj(const fs::path& path, const Trajectory& traj) { write_text(path, traj_to_string(traj)); }

Trajectory read_traj(const fs::path& path) {
  try {
    return traj_from_string(read_text(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- jsq

std::vector<std::uint8_t> jsq_to_bytes(const JointSequence& seq) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + seq.size() * kNumJoints * 3 * sizeof(double));
  out.insert(out.end(), kJsqMagic, kJsqMagic + 4);
  put<std::uint32_t>(out, kJsqVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(seq.size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(kNumJoints));
  for (const auto& f : seq.frames()) {
    for (const auto& j : f) {
      put(out, j.x());
      put(out, j.y());
      put(out, j.z());
    }
  }
  return out;
}

JointSequence jsq_from_bytes(const std::vector<std::uint8_t>& bytes, CoordinateFrame frame, double frame_rate) {
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kJsqMagic, 4) != 0) fail(ErrorKind::Io, "not a joint sequence");
  std::size_t pos = 4;
  const auto version = take<std::uint32_t>(bytes, pos);
  if (version != kJsqVersion) {
    throw Error(ErrorKind::UnsupportedVersion, "jsq version " + std::to_string(version) + " is not supported");
  }
  const auto frames = take<std::uint32_t>(bytes, pos);
  const auto joints = take<std::uint32_t>(bytes, pos);
  if (joints != kNumJoints) fail(ErrorKind::Io, "jsq has " + std::to_string(joints) + " joints, expected 15");
  if (bytes.size() != 16 + static_cast<std::size_t>(frames) * joints * 3 * sizeof(double)) {
    fail(ErrorKind::Io, "jsq size does not match its header");
  }
  std::vector<JointFrame> out(frames);
  for (auto& f : out) {
    for (auto& j : f) {
      const double x = take<double>(bytes, pos);
      const double y = take<double>(bytes, pos);
      const double z = take<double>(bytes, pos);
      j = Vec3(x, y, z);
    }
  }
  return JointSequence(std::move(out), frame, frame_rate);
}

json jsq_sidecar(const JointSequence& seq) {
  json order = json::array();
  for (auto n : kJointNames) order.push_back(std::string(n));
  return {{"format", "jsq"},
          {"version", kJsqVersion},
          {"frames", seq.size()},
          {"joints", kNumJoints},
          {"frame_rate", seq.frame_rate()},
          {"coordinate_frame", std::string(to_string(seq.coordinate_frame()))},
          {"joint_order", order}};
}

fs::path sidecar_path(const fs::path& jsq_path) {
  fs::path p = jsq_path;
  p += ".json";
  return p;
}

void write_jsq(const fs::path& path, const JointSequence& seq, const json& extra_sidecar) {
  write_bytes(path, jsq_to_bytes(seq));
  json side = jsq_sidecar(seq);
  side.update(extra_sidecar);
  write_text(sidecar_path(path), side.dump(2) + "\n");
}

JointSequence read_jsq(const fs::path& path, json* sidecar_out) {
  json side;
  try {
    side = json::parse(read_text(sidecar_path(path)));
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, sidecar_path(path).string() + ": " + e.what());
  }
  check_header(side, "jsq", kJsqVersion);
  const CoordinateFrame frame = coordinate_frame_from_string(side.value("coordinate_frame", "world"));
  const double fps = side.value("frame_rate", 30.0);
  JointSequence seq = jsq_from_bytes(read_bytes(path), frame, fps);
  if (side.value("frames", seq.size()) != seq.size()) fail(ErrorKind::Io, "jsq sidecar frame count mismatch");
  if (sidecar_out != nullptr) *sidecar_out = std::move(side);
  return seq;
}

// ---------------------------------------------------------------- obs

std::string obs_to_string(const std::vector<WeakPerspectiveObservation>& obs, double frame_rate) {
  std::string out =
      json{{"format", "obs"}, {"version", kObsVersion}, {"frames", obs.size()}, {"frame_rate", frame_rate}}.dump();
  out += '\n';
  for (std::size_t i = 0; i < obs.size(); ++i) {
    const auto& o = obs[i];
    json joints = json::array();
    for (const auto& j : o.joints_camera) joints.push_back(vec_json(j));
    out += json{{"frame", i},
                {"scale", o.scale},
                {"t_x", o.t_x},
                {"t_y", o.t_y},
                {"global_orientation", vec_json(o.global_orientation.to_axis_angle())},
                {"joints", joints}}
               .dump();
    out += '\n';
  }
  return out;
}

std::vector<WeakPerspectiveObservation> obs_from_string(const std::string& text, double* frame_rate_out) {
  const std::vector<json> lines = parse_lines(text);
  check_header(lines.front(), "obs", kObsVersion);
  std::vector<WeakPerspectiveObservation> out;
  try {
    if (frame_rate_out != nullptr) *frame_rate_out = lines.front().value("frame_rate", 30.0);
    const auto frames = lines.front().at("frames").get<std::size_t>();
    if (lines.size() - 1 != frames) fail(ErrorKind::Io, "obs header frame count mismatch");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const json& l = lines[i];
      WeakPerspectiveObservation o;
      o.scale = l.at("scale").get<double>();
      o.t_x = l.at("t_x").get<double>();
      o.t_y = l.at("t_y").get<double>();
      o.global_orientation = Rotation3::from_axis_angle(vec_from(l.at("global_orientation"), "global_orientation"));
      const json& js = l.at("joints");
      if (!js.is_array() || js.size() != kNumJoints) fail(ErrorKind::Io, "observation needs 15 joints");
      for (std::size_t j = 0; j < kNumJoints; ++j) o.joints_camera[j] = vec_from(js[j], "joint");
      out.push_back(o);
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, std::string("malformed obs: ") + e.what());
  }
  return out;
}

void write_obs(const fs::path& path, const std::vector<WeakPerspectiveObservation>& obs, double frame_rate) {
  write_text(path, obs_to_string(obs, frame_rate));
}

std::vector<WeakPerspectiveObservation> read_obs(const fs::path& path, double* frame_rate_out) {
  return obs_from_string(read_text(path), frame_rate_out);
}

// ---------------------------------------------------------------- json views

json intrinsics_to_json(const CameraIntrinsics& k) {
  return {{"focal_px", k.focal_px},
          {"crop_resolution", k.crop_resolution},
          {"image_width", k.image_width},
          {"image_height", k.image_height},
          {"source", std::string(to_string(k.source))}};
}

CameraIntrinsics intrinsics_from_json(const json& j) {
  try {
    CameraIntrinsics k;
    k.focal_px = j.at("focal_px").get<double>();
    k.crop_resolution = j.at("crop_resolution").get<int>();
    k.image_width = j.at("image_width").get<int>();
    k.image_height = j.at("image_height").get<int>();
    k.source = intrinsic_source_from_string(j.value("source", "exact"));
    k.validate();
    return k;
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, std::string("malformed intrinsics: ") + e.what());
  }
}

namespace {

json pose_json(const RigidTransform& t) {
  return {{"translation", vec_json(t.translation)}, {"rotation", vec_json(t.rotation.to_axis_angle())}};
}

json keyframe_json(const Keyframe& k) {
  json j{{"frame", k.frame_index},
         {"pose", pose_json(k.camera_pose)},
         {"relative", {{"radius", k.relative.radius}, {"theta", k.relative.theta}, {"phi", k.relative.phi}}}};
  if (k.view_fraction) j["view_fraction"] = *k.view_fraction;
  return j;
}

json similarity_json(const SimilarityTransform& s) {
  return {{"scale", s.scale}, {"rotation", vec_json(s.rotation.to_axis_angle())}, {"translation", vec_json(s.translation)}};
}

json ate_json(const AteResult& a) {
  return {{"ate_mm", a.ate_mm}, {"alignment_scale", a.alignment_scale}};
}

}  // namespace

json shots_to_json(const ComposedShots& shots) {
  json segs = json::array();
  for (const auto& s : shots.segments) {
    json keys = json::array();
    for (const auto& k : s.keyframes) keys.push_back(keyframe_json(k));
    json seg{{"kind", std::string(to_string(s.kind))},
             {"first_frame", s.first_frame},
             {"last_frame", s.last_frame},
             {"parameters", s.parameters},
             {"keyframes", keys}};
    if (s.arc_axis) seg["arc_axis"] = *s.arc_axis == ArcAxis::Horizontal ? "horizontal" : "vertical";
    segs.push_back(seg);
  }
  json indices = json::array();
  for (const auto& k : shots.keyframes) indices.push_back(k.frame_index);
  return {{"format", "shot_manifest"},
          {"version", 1},
          {"static_motion", shots.static_motion},
          {"bbox_longest_edge", shots.bbox_longest_edge},
          {"keyframe_rule", std::string(to_string(shots.overlap_rule))},
          {"keyframe_count", shots.keyframes.size()},
          {"keyframe_indices", indices},
          {"segments", segs}};
}

json diagnostics_to_json(const PipelineResult& result) {
  const auto& d = result.diagnostics;
  json stages = json::array();
  for (const auto& [name, secs] : d.stage_seconds) stages.push_back({{"stage", name}, {"seconds", secs}});
  json windows = json::array();
  for (const auto& w : d.alignment_windows) {
    windows.push_back({{"first_frame", w.first_frame}, {"frame_count", w.frame_count}, {"alignment", similarity_json(w.alignment)}});
  }
  json j{{"format", "diagnostics"},
         {"version", 1},
         {"status", result.status == PipelineStatus::Ok ? "ok" : "degenerate-alignment"},
         {"mode", std::string(to_string(d.mode))},
         {"velocimeter", d.velocimeter},
         {"fallback_mv_only", d.fallback_mv_only},
         {"warning", d.warning},
         {"alignment_residual_rms", d.alignment_residual_rms},
         {"alignment_windows", windows},
         {"root_depths", d.root_depths},
         {"stages", stages}};
  j["alignment"] = d.alignment ? similarity_json(*d.alignment) : json(nullptr);
  return j;
}

json report_to_json(const SegmentReport& r) {
  json j{{"format", "segment_report"},
         {"version", 1},
         {"frames", r.frames},
         {"segment_length", r.segment_length},
         {"w_mpjpe_alignment", r.w_alignment}};
  if (r.world) {
    json segs = json::array();
    for (const auto& s : r.world->segments) {
      segs.push_back({{"first_frame", s.segment.first},
                      {"frames", s.segment.count},
                      {"partial", s.segment.partial},
                      {"w_mpjpe_mm", s.w_mpjpe},
                      {"wa_mpjpe_mm", s.wa_mpjpe}});
    }
    j["w_mpjpe_mm"] = r.world->w_mpjpe;
    j["wa_mpjpe_mm"] = r.world->wa_mpjpe;
    j["segments"] = segs;
  }
  if (r.human) j["human"] = ate_json(*r.human);
  if (r.camera) j["camera"] = ate_json(*r.camera);
  if (r.camera_frame) {
    j["camera_frame"] = {{"mpjpe_mm", r.camera_frame->mpjpe},
                         {"pa_mpjpe_mm", r.camera_frame->pa_mpjpe},
                         {"t_mpjpe_mm", r.camera_frame->t_mpjpe},
                         {"accel_m_s2", r.camera_frame->accel}};
  }
  return j;
}

std::string report_to_csv(const SegmentReport& r, const std::string& sequence_name) {
  auto opt = [](bool have, double v) { return have ? fmt_double(v) : std::string(); };
  std::ostringstream s;
  s << "row,sequence,first_frame,frames,partial,w_mpjpe_mm,wa_mpjpe_mm,h_ate_mm,h_as,c_ate_mm,c_as,"
       "mpjpe_mm,pa_mpjpe_mm,t_mpjpe_mm,accel_m_s2\n";
  const bool w = r.world.has_value();
  const bool cf = r.camera_frame.has_value();
  s << "sequence," << sequence_name << ",0," << r.frames << ",0," << opt(w, w ? r.world->w_mpjpe : 0) << ','
    << opt(w, w ? r.world->wa_mpjpe : 0) << ',' << opt(r.human.has_value(), r.human ? r.human->ate_mm : 0) << ','
    << opt(r.human.has_value(), r.human ? r.human->alignment_scale : 0) << ','
    << opt(r.camera.has_value(), r.camera ? r.camera->ate_mm : 0) << ','
    << opt(r.camera.has_value(), r.camera ? r.camera->alignment_scale : 0) << ','
    << opt(cf, cf ? r.camera_frame->mpjpe : 0) << ',' << opt(cf, cf ? r.camera_frame->pa_mpjpe : 0) << ','
    << opt(cf, cf ? r.camera_frame->t_mpjpe : 0) << ',' << opt(cf, cf ? r.camera_frame->accel : 0) << '\n';
  if (w) {
    for (const auto& seg : r.world->segments) {
      s << "segment," << sequence_name << ',' << seg.segment.first << ',' << seg.segment.count << ','
        << (seg.segment.partial ? 1 : 0) << ',' << fmt_double(seg.w_mpjpe) << ',' << fmt_double(seg.wa_mpjpe)
        << ",,,,,,,,\n";
    }
  }
  return s.str();
}

// ---------------------------------------------------------------- bundles

void write_scene_bundle(const fs::path& dir, const SyntheticScene& scene,
                        const std::vector<WeakPerspectiveObservation>& observations, const Trajectory& vo,
                        const json& extra_metadata) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  json meta{{"format", "scene"},
            {"version", kBundleVersion},
            {"seed", scene.seed},
            {"motion", std::string(to_string(scene.motion))},
            {"frames", scene.size()},
            {"frame_rate", scene.frame_rate()},
            {"intrinsics", intrinsics_to_json(scene.intrinsics)},
            {"world_from_sim", pose_json(scene.world_from_sim)}};
  meta.update(extra_metadata);
  write_text(dir / "scene.json", meta.dump(2) + "\n");
  write_traj(dir / "gt_human.traj", scene.gt_human);
  write_traj(dir / "gt_camera.traj", scene.gt_camera);
  write_jsq(dir / "joints.jsq", scene.gt_joints_world);
  write_obs(dir / "observations.obs", observations, scene.frame_rate());
  write_traj(dir / "vo.traj", vo);
  write_text(dir / "shot_manifest.json", shots_to_json(scene.shots).dump(2) + "\n");
}

SceneBundle read_scene_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::Io, "scene bundle " + dir.string() + " does not exist");
  SceneBundle b;
  try {
    b.metadata = json::parse(read_text(dir / "scene.json"));
  } catch (const json::exception& e) {
    fail(ErrorKind::Io, "scene.json: " + std::string(e.what()));
  }
  check_header(b.metadata, "scene", kBundleVersion);
  b.intrinsics = intrinsics_from_json(b.metadata.at("intrinsics"));
  b.gt_human = read_traj(dir / "gt_human.traj");
  b.gt_camera = read_traj(dir / "gt_camera.traj");
  b.gt_joints_world = read_jsq(dir / "joints.jsq");
  b.observations = read_obs(dir / "observations.obs");
  b.vo = read_traj(dir / "vo.traj");
  if (fs::exists(dir / "shot_manifest.json")) {
    try {
      b.shot_manifest = json::parse(read_text(dir / "shot_manifest.json"));
    } catch (const json::exception& e) {
      fail(ErrorKind::Io, "shot_manifest.json: " + std::string(e.what()));
    }
  }
  return b;
}

void write_corpus(const fs::path& dir, const std::vector<MotionCorpusEntry>& entries) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    json vel = json::array();
    for (const auto& v : e.velocities.velocities) vel.push_back(vec_json(v));
    std::ostringstream name;
    name << std::setw(5) << std::setfill('0') << i << '_' << e.label << ".jsq";
    write_jsq(dir / name.str(), e.joints, {{"motion_label", e.label}, {"velocities", vel}});
  }
}

std::vector<MotionCorpusEntry> read_corpus(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::Io, "corpus directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".jsq") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<MotionCorpusEntry> out;
  for (const auto& f : files) {
    json side;
    JointSequence joints = read_jsq(f, &side);
    MotionCorpusEntry e{std::move(joints), {}, side.value("motion_label", "")};
    e.velocities.coordinate_frame = CoordinateFrame::Canonical;
    if (!side.contains("velocities")) fail(ErrorKind::Io, f.string() + ": sidecar lacks velocities");
    for (const auto& v : side.at("velocities")) e.velocities.velocities.push_back(vec_from(v, "velocity"));
    e.validate();
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------- csv

std::string traj_to_csv(const Trajectory& traj) {
  std::ostringstream s;
  s << "frame,x,y,z,qx,qy,qz,qw\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Vec3& t = traj[i].translation;
    const auto q = traj[i].rotation.to_quaternion();
    s << i << ',' << fmt_double(t.x()) << ',' << fmt_double(t.y()) << ',' << fmt_double(t.z()) << ','
      << fmt_double(q.x()) << ',' << fmt_double(q.y()) << ',' << fmt_double(q.z()) << ',' << fmt_double(q.w()) << '\n';
  }
  return s.str();
}

Trajectory traj_from_csv(const std::string& text, ScaleStatus status, double frame_rate) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("frame,x,y,z,qx,qy,qz,qw", 0) != 0) {
    fail(ErrorKind::Io, "CSV lacks the trajectory header");
  }
  Trajectory out;
  out.scale_status = status;
  out.frame_rate = frame_rate;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::Io, "bad CSV cell '" + cell + "'");
      }
    }
    if (v.size() != 8) fail(ErrorKind::Io, "CSV row needs 8 columns");
    if (static_cast<std::size_t>(v[0]) != out.size()) fail(ErrorKind::Io, "CSV frames out of order");
    const Eigen::Quaterniond q(v[7], v[4], v[5], v[6]);
    out.poses.push_back({Rotation3::from_quaternion(q), Vec3(v[1], v[2], v[3])});
  }
  return out;
}

std::string overlay_csv(const std::vector<Trajectory>& trajs, const std::vector<std::string>& names) {
  if (trajs.size() != names.size()) fail(ErrorKind::InvalidArgument, "one name per trajectory");
  std::ostringstream s;
  s << "frame";
  for (const auto& n : names) {
    for (const char* c : {"x", "y", "z", "qx", "qy", "qz", "qw"}) s << ',' << n << '_' << c;
  }
  s << '\n';
  std::size_t rows = 0;
  for (const auto& t : trajs) rows = std::max(rows, t.size());
  for (std::size_t i = 0; i < rows; ++i) {
    s << i;
    for (const auto& t : trajs) {
      if (i >= t.size()) {
        s << ",,,,,,,";
        continue;
      }
      const Vec3& p = t[i].translation;
      const auto q = t[i].rotation.to_quaternion();
      for (double v : {p.x(), p.y(), p.z(), q.x(), q.y(), q.z(), q.w()}) s << ',' << fmt_double(v);
    }
    s << '\n';
  }
  return s.str();
}

std::uint64_t file_checksum(const fs::path& path) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : read_bytes(path)) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace worldtraj::io
