#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "support.hpp"
#include "worldtraj/cli.hpp"
#include "worldtraj/io.hpp"

namespace wt_test {
namespace {

namespace io = worldtraj::io;
namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "worldtraj");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = worldtraj::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("wt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  std::string path(const std::string& rel) const { return (root_ / rel).string(); }

  fs::path root_;
};

#define EXPECT_EXIT_CODE(inv, expected) EXPECT_EQ((inv).code, (expected)) << (inv).out << (inv).err

TEST_F(CliTest, SimulateIsDeterministic) {
  for (const char* d : {"a", "b"}) {
    EXPECT_EXIT_CODE(invoke({"simulate", "--frames", "90", "--seed", "4", "--out", path(d)}), 0);
  }
  for (const char* f : {"gt_human.traj", "gt_camera.traj", "joints.jsq", "observations.obs", "vo.traj"}) {
    EXPECT_EQ(io::file_checksum(path("a") + "/" + f), io::file_checksum(path("b") + "/" + f)) << f;
  }
  EXPECT_EXIT_CODE(invoke({"simulate", "--frames", "90", "--seed", "5", "--out", path("c")}), 0);
  EXPECT_NE(io::file_checksum(path("a") + "/gt_human.traj"), io::file_checksum(path("c") + "/gt_human.traj"));
}

TEST_F(CliTest, ArcManifestHasFiveKeyframes) {
  const Invocation r = invoke({"simulate", "--shot", "arc", "--phi-range", "0:180", "--dphi", "45", "--frames", "60",
                              "--out", path("arc")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::SceneBundle b = io::read_scene_bundle(path("arc"));
  ASSERT_EQ(b.shot_manifest.at("segments").size(), 1u);
  EXPECT_EQ(b.shot_manifest.at("segments")[0].at("keyframes").size(), 5u);
  EXPECT_EQ(b.shot_manifest.at("segments")[0].at("kind"), "arc");
}

TEST_F(CliTest, RunRecoversVoScale) {
  ASSERT_EQ(invoke({"simulate", "--frames", "120", "--seed", "8", "--out", path("s")}).code, 0);
  const Invocation r = invoke({"run", path("s"), "--vo-scale", "0.25", "--out", path("r")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::json diag = io::json::parse(io::read_text(path("r") + "/diagnostics.json"));
  EXPECT_NEAR(diag.at("alignment").at("scale").get<double>(), 4.0, 1e-6);
  const io::SceneBundle b = io::read_scene_bundle(path("s"));
  EXPECT_LE(max_position_error(io::read_traj(path("r") + "/human.traj"), b.gt_human), 1e-6);
  EXPECT_EXIT_CODE(invoke({"run", path("s"), "--vo-scale", "1", "--vo-file", path("s") + "/vo.traj", "--out", path("x")}), 2);
}

TEST_F(CliTest, StaticBundleIsDegenerate) {
  ASSERT_EQ(invoke({"simulate", "--shot", "static", "--frames", "60", "--out", path("s")}).code, 0);
  const Invocation r = invoke({"run", path("s"), "--out", path("r")});
  EXPECT_EXIT_CODE(r, 5);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("r") + "/human.traj"));
}

TEST_F(CliTest, DummyIntrinsicsScaleDepth) {
  ASSERT_EQ(invoke({"simulate", "--frames", "60", "--out", path("s")}).code, 0);
  ASSERT_EQ(invoke({"run", path("s"), "--out", path("exact")}).code, 0);
  ASSERT_EQ(invoke({"run", path("s"), "--intrinsics", "dummy:5000", "--out", path("dummy")}).code, 0);
  const auto d0 = io::json::parse(io::read_text(path("exact") + "/diagnostics.json")).at("root_depths");
  const auto d1 = io::json::parse(io::read_text(path("dummy") + "/diagnostics.json")).at("root_depths");
  ASSERT_EQ(d0.size(), d1.size());
  for (std::size_t i = 0; i < d0.size(); ++i) EXPECT_NEAR(d1[i].get<double>() / d0[i].get<double>(), 5.0, 1e-9);
  EXPECT_EXIT_CODE(invoke({"run", path("s"), "--intrinsics", "guess", "--out", path("bad")}), 2);
}

TEST_F(CliTest, EvalGroundTruthAgainstItself) {
  ASSERT_EQ(invoke({"simulate", "--frames", "120", "--out", path("s")}).code, 0);
  const std::string gt = path("s") + "/gt_human.traj";
  const Invocation r = invoke({"eval", "--est-human", gt, "--gt-human", gt, "--est-joints", path("s") + "/joints.jsq",
                               "--gt-joints", path("s") + "/joints.jsq", "--out", path("e")});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::json rep = io::json::parse(io::read_text(path("e") + "/report.json"));
  EXPECT_NEAR(rep.at("human").at("ate_mm").get<double>(), 0.0, 1e-9);
  EXPECT_NEAR(rep.at("w_mpjpe_mm").get<double>(), 0.0, 1e-9);
  EXPECT_TRUE(fs::exists(path("e") + "/report.csv"));
}

TEST_F(CliTest, TrainOnEmptyCorpusFails) {
  fs::create_directories(path("empty"));
  EXPECT_EXIT_CODE(invoke({"train-mv", "--corpus", path("empty"), "--out", path("m.wtm")}), 6);
  EXPECT_EXIT_CODE(invoke({"train-mv", "--corpus", path("empty"), "--synthetic", "--out", path("m.wtm")}), 2);
}

TEST_F(CliTest, TinyTrainingRunWritesModel) {
  ASSERT_EQ(invoke({"make-corpus", "--sequences", "6", "--frames", "48", "--out", path("c")}).code, 0);
  const Invocation r = invoke({"train-mv", "--corpus", path("c"), "--epochs", "1", "--hidden", "8", "--out", path("m.wtm")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("m.wtm")));
  ASSERT_EQ(invoke({"simulate", "--frames", "40", "--out", path("s")}).code, 0);
  EXPECT_EXIT_CODE(invoke({"run", path("s"), "--velocimeter", path("m.wtm"), "--out", path("r")}), 0);
  EXPECT_EXIT_CODE(invoke({"run", path("s"), "--velocimeter", path("nope.wtm"), "--out", path("r2")}), 3);
}

TEST_F(CliTest, ExportRowsAndRoundTrip) {
  ASSERT_EQ(invoke({"simulate", "--frames", "50", "--out", path("s")}).code, 0);
  const std::string gt = path("s") + "/gt_human.traj";
  ASSERT_EQ(invoke({"export", gt, "--out", path("h.csv")}).code, 0);
  const std::string csv = io::read_text(path("h.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 51);
  ASSERT_EQ(invoke({"export", path("h.csv"), "--from-csv", "--out", path("h.traj")}).code, 0);
  EXPECT_LE(max_position_error(io::read_traj(path("h.traj")), io::read_traj(gt)), 1e-15);
  ASSERT_EQ(invoke({"export", gt, path("s") + "/gt_camera.traj", "--out", path("o.csv")}).code, 0);
  EXPECT_NE(io::read_text(path("o.csv")).find("gt_camera_x"), std::string::npos);
}

TEST_F(CliTest, OutputRootAppliesToRelativePaths) {
  ::setenv("WORLDTRAJ_OUTPUT_ROOT", root_.c_str(), 1);
  const Invocation r = invoke({"simulate", "--frames", "30", "--out", "rel"});
  ::unsetenv("WORLDTRAJ_OUTPUT_ROOT");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(root_ / "rel" / "scene.json"));
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EXIT_CODE(invoke({}), 2);
  EXPECT_EXIT_CODE(invoke({"simulate"}), 2);
  EXPECT_EXIT_CODE(invoke({"simulate", "--motion", "hop", "--out", path("x")}), 2);
  EXPECT_EXIT_CODE(invoke({"simulate", "--shot", "push", "--frac-range", "0.5", "--out", path("x")}), 2);
  EXPECT_EXIT_CODE(invoke({"run", path("missing"), "--out", path("r")}), 3);
  EXPECT_EXIT_CODE(invoke({"--version"}), 0);
}

}  // namespace
}  // namespace wt_test
