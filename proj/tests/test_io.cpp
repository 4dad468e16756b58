#include <algorithm>
#include <regex>
#include <sstream>

#include "scenes.hpp"
#include "support.hpp"
#include "worldtraj/errors.hpp"
#include "worldtraj/io.hpp"

namespace wt_test {
namespace {

namespace io = worldtraj::io;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("wt_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Traj, RoundTrip) {
  Gen g(91);
  Trajectory t = g.trajectory(25, 0.4);
  t.scale_status = ScaleStatus::Scaleless;
  t.frame_rate = 24.0;
  const Trajectory back = io::traj_from_string(io::traj_to_string(t));
  EXPECT_EQ(back.scale_status, ScaleStatus::Scaleless);
  EXPECT_EQ(back.frame_rate, 24.0);
  ASSERT_EQ(back.size(), t.size());
  EXPECT_LE(max_position_error(back, t), 0.0);
  EXPECT_LE(max_rotation_error(back, t), 1e-12);
}

TEST(Traj, RejectsVersionAndMalformed) {
  Gen g(92);
  std::string text = io::traj_to_string(g.trajectory(3));
  const std::string bumped = std::regex_replace(text, std::regex("\"version\":1"), "\"version\":2");
  expect_error([&] { io::traj_from_string(bumped); }, ErrorKind::UnsupportedVersion);
  expect_error([&] { io::traj_from_string(text.substr(0, text.size() / 2)); }, ErrorKind::Io);
  expect_error([] { io::traj_from_string(""); }, ErrorKind::Io);
  expect_error([] { io::read_traj("/nonexistent/x.traj"); }, ErrorKind::Io);
}

TEST(Jsq, BinaryLayoutAndRoundTrip) {
  Gen g(93);
  std::vector<JointFrame> frames;
  for (int i = 0; i < 7; ++i) frames.push_back(g.joint_frame());
  const JointSequence seq(frames, CoordinateFrame::Canonical, 25.0);
  const auto bytes = io::jsq_to_bytes(seq);
  EXPECT_EQ(bytes.size(), 16u + 7u * 15u * 3u * 8u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "JSEQ");
  const JointSequence back = io::jsq_from_bytes(bytes, CoordinateFrame::Canonical, 25.0);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = 0; j < kNumJoints; ++j) EXPECT_EQ(back[i][j], seq[i][j]);
  }

  TempDir dir;
  const auto path = dir.path() / "a.jsq";
  io::write_jsq(path, seq, {{"label", "x"}});
  io::json side;
  const JointSequence file = io::read_jsq(path, &side);
  EXPECT_EQ(file.coordinate_frame(), CoordinateFrame::Canonical);
  EXPECT_EQ(file.frame_rate(), 25.0);
  EXPECT_EQ(side.at("label"), "x");
  EXPECT_TRUE(std::filesystem::exists(io::sidecar_path(path)));
}

TEST(Jsq, RejectsCorruption) {
  Gen g(94);
  const JointSequence seq({g.joint_frame(), g.joint_frame()}, CoordinateFrame::World);
  auto bytes = io::jsq_to_bytes(seq);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 5);
  expect_error([&] { io::jsq_from_bytes(truncated, CoordinateFrame::World, 30); }, ErrorKind::Io);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  expect_error([&] { io::jsq_from_bytes(bad_magic, CoordinateFrame::World, 30); }, ErrorKind::Io);
  auto bad_version = bytes;
  bad_version[4] = 9;
  expect_error([&] { io::jsq_from_bytes(bad_version, CoordinateFrame::World, 30); }, ErrorKind::UnsupportedVersion);
}

TEST(Obs, RoundTrip) {
  const SyntheticScene s = generate_scene(walk_tracking_config(5, 30));
  const auto obs = simulate_ehps(s, 0.005, 5);
  double fps = 0.0;
  const auto back = io::obs_from_string(io::obs_to_string(obs, 30.0), &fps);
  EXPECT_EQ(fps, 30.0);
  ASSERT_EQ(back.size(), obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    EXPECT_EQ(back[i].scale, obs[i].scale);
    EXPECT_EQ(back[i].t_x, obs[i].t_x);
    EXPECT_EQ(back[i].t_y, obs[i].t_y);
    EXPECT_LE(max_diff(back[i].global_orientation, obs[i].global_orientation), 1e-12);
    for (std::size_t j = 0; j < kNumJoints; ++j) EXPECT_EQ(back[i].joints_camera[j], obs[i].joints_camera[j]);
  }
}

TEST(Intrinsics, RoundTripAllKinds) {
  for (const auto& k : {CameraIntrinsics::exact(1200, 1920, 1080, 256), CameraIntrinsics::diagonal_heuristic(1280, 720, 224),
                        CameraIntrinsics::dummy(1000, 1000, 256)}) {
    const CameraIntrinsics back = io::intrinsics_from_json(io::intrinsics_to_json(k));
    EXPECT_EQ(back.focal_px, k.focal_px);
    EXPECT_EQ(back.source, k.source);
    EXPECT_EQ(back.ndc_focal(), k.ndc_focal());
  }
}

TEST(Bundle, RoundTripAndChecksumDeterminism) {
  TempDir dir;
  const SyntheticScene s = generate_scene(walk_tracking_config(6, 60));
  const auto obs = simulate_ehps(s, 0.0, 6);
  const Trajectory vo = simulate_vo(s.gt_camera, {0.5, 0, 0, 0}, 6);
  io::write_scene_bundle(dir.path() / "a", s, obs, vo, {{"note", "t"}});
  io::write_scene_bundle(dir.path() / "b", s, obs, vo, {{"note", "t"}});
  for (const char* f : {"scene.json", "gt_human.traj", "gt_camera.traj", "joints.jsq", "observations.obs", "vo.traj",
                        "shot_manifest.json"}) {
    EXPECT_EQ(io::file_checksum(dir.path() / "a" / f), io::file_checksum(dir.path() / "b" / f)) << f;
  }
  const io::SceneBundle b = io::read_scene_bundle(dir.path() / "a");
  EXPECT_EQ(b.metadata.at("note"), "t");
  EXPECT_LE(max_position_error(b.gt_human, s.gt_human), 0.0);
  EXPECT_LE(max_position_error(b.vo, vo), 0.0);
  EXPECT_EQ(b.vo.scale_status, ScaleStatus::Scaleless);
  EXPECT_EQ(b.observations.size(), obs.size());
  EXPECT_EQ(b.gt_joints_world.size(), s.size());
  EXPECT_EQ(b.intrinsics.focal_px, s.intrinsics.focal_px);
  expect_error([&] { io::read_scene_bundle(dir.path() / "missing"); }, ErrorKind::Io);
}

TEST(Corpus, RoundTrip) {
  TempDir dir;
  CorpusConfig cfg;
  cfg.sequences = 6;
  cfg.frames = 20;
  const auto entries = build_motion_corpus(cfg);
  io::write_corpus(dir.path(), entries);
  const auto back = io::read_corpus(dir.path());
  ASSERT_EQ(back.size(), entries.size());
  for (std::size_t n = 0; n < entries.size(); ++n) {
    EXPECT_EQ(back[n].label, entries[n].label);
    ASSERT_EQ(back[n].velocities.size(), entries[n].velocities.size());
    EXPECT_EQ(back[n].joints[3][4], entries[n].joints[3][4]);
  }
}

TEST(Csv, TrajectoryRoundTripAndOverlay) {
  Gen g(95);
  const Trajectory t = g.trajectory(12, 0.3);
  const std::string csv = io::traj_to_csv(t);
  EXPECT_EQ(count_lines(csv), 13u);
  const Trajectory back = io::traj_from_csv(csv);
  EXPECT_LE(max_position_error(back, t), 1e-15);
  EXPECT_LE(max_rotation_error(back, t), 1e-12);
  expect_error([] { io::traj_from_csv("a,b\n1,2\n"); }, ErrorKind::Io);

  const std::string overlay = io::overlay_csv({t, g.trajectory(5)}, {"est", "gt"});
  EXPECT_EQ(count_lines(overlay), 13u);
  EXPECT_NE(overlay.find("est_x"), std::string::npos);
  EXPECT_NE(overlay.find("gt_z"), std::string::npos);
}

TEST(Csv, ReportRows) {
  const SyntheticScene s = generate_scene(walk_tracking_config(7, 250));
  EvaluationInput in;
  in.est_joints_world = s.gt_joints_world;
  in.gt_joints_world = s.gt_joints_world;
  in.est_human = s.gt_human;
  in.gt_human = s.gt_human;
  const std::string csv = io::report_to_csv(evaluate(in), "walk");
  EXPECT_EQ(count_lines(csv), 1u + 1u + 3u);
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) EXPECT_EQ(std::count(line.begin(), line.end(), ','), 14) << line;
}

}  // namespace
}  // namespace wt_test
