#include <memory>

#include "support.hpp"
#include "worldtraj/errors.hpp"
#include "worldtraj/gru.hpp"
#include "worldtraj/simulator.hpp"
#include "worldtraj/velocimeter.hpp"

namespace wt_test {
namespace {

JointSequence canonical_seq(std::size_t k, std::uint64_t seed = 0) {
  Gen g(seed);
  return JointSequence(g.joint_frames(k), CoordinateFrame::Canonical);
}

TEST(Oracle, StaticPoseGivesZeroVelocities) {
  const std::vector<Vec3> roots(12, Vec3(1, 2, 0.9));
  const auto oracle = OracleVelocimeter::from_ground_truth(roots, Rotation3::about_z(0.3));
  const VelocityEstimate e = estimate_velocities(oracle, canonical_seq(12));
  ASSERT_EQ(e.velocities.size(), 11u);
  for (const auto& v : e.velocities.velocities) EXPECT_EQ(v, Vec3::Zero());
}

TEST(Oracle, WalkAlongHeadingIsCanonicalPlusX) {
  const double heading = 1.1;
  const Rotation3 r0 = Rotation3::about_z(heading);
  std::vector<Vec3> roots;
  for (int i = 0; i < 60; ++i) roots.push_back(r0 * Vec3(0.04 * i, 0, 0) + Vec3(3, -2, 0.87));
  const auto oracle = OracleVelocimeter::from_ground_truth(roots, r0);
  for (const auto& v : estimate_velocities(oracle, canonical_seq(60)).velocities.velocities) {
    EXPECT_VEC_NEAR(v, Vec3(0.04, 0, 0), 1e-12);
  }
}

TEST(Oracle, SimulatedStraightWalkAveragesToPlusX) {
  MotionParams p;
  p.speed = 1.2;
  p.heading = 0.7;
  const GeneratedMotion m = generate_motion(MotionKind::StraightWalk, p, 301, 3);
  const MotionCorpusEntry e = corpus_entry_from_motion(m, "walk");
  const auto oracle = OracleVelocimeter(e.velocities);
  Vec3 sum = Vec3::Zero();
  for (const auto& v : estimate_velocities(oracle, e.joints).velocities.velocities) sum += v;
  const Vec3 mean = sum / 300.0;
  // Sway and yaw oscillation average out over whole gait cycles only
  // approximately; heading drift of the frame-0 orientation shows up in y.
  EXPECT_NEAR(mean.norm(), 0.04, 1e-3);
  EXPECT_GT(mean.x(), 0.039);
}

TEST(Oracle, ShortSequenceIsFlaggedEmpty) {
  const OracleVelocimeter oracle(VelocitySequence{{}, CoordinateFrame::Canonical});
  const VelocityEstimate e = estimate_velocities(oracle, canonical_seq(1));
  EXPECT_TRUE(e.empty_window);
  EXPECT_TRUE(e.velocities.empty());
}

TEST(Oracle, RejectsNonCanonicalInput) {
  const OracleVelocimeter oracle(VelocitySequence{{Vec3::Zero()}, CoordinateFrame::Canonical});
  Gen g(1);
  const JointSequence w(g.joint_frames(2), CoordinateFrame::World);
  expect_error([&] { estimate_velocities(oracle, w); }, ErrorKind::WrongFrame);
}

TEST(OracleProperty, RotationEquivariance) {
  Gen g(51);
  for (int n = 0; n < 20; ++n) {
    std::vector<Vec3> roots;
    for (int i = 0; i < 20; ++i) roots.push_back(g.vec(3.0));
    const Rotation3 r0 = g.rotation();
    const Rotation3 q = g.rotation();
    const auto a = OracleVelocimeter::from_ground_truth(roots, r0).estimate(canonical_seq(20));
    // Rotating the canonical frame by q rotates every oracle velocity by q.
    const auto b = OracleVelocimeter::from_ground_truth(roots, r0 * q.inverse()).estimate(canonical_seq(20));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_VEC_NEAR(b.velocities[i], Vec3(q * a.velocities[i]), 1e-12);
  }
}

// ---------------------------------------------------------------- GRU

float weighted_sum(const std::vector<nn::Matrix>& outputs, const std::vector<nn::Matrix>& weights) {
  double s = 0.0;
  for (std::size_t t = 0; t < outputs.size(); ++t) s += outputs[t].cwiseProduct(weights[t]).cast<double>().sum();
  return static_cast<float>(s);
}

TEST(Gru, BackwardMatchesFiniteDifferences) {
  nn::GruNetwork net(5, 4, 2, 3);
  std::mt19937_64 rng(7);
  net.initialize(rng);
  std::normal_distribution<float> n01(0.0f, 1.0f);
  std::vector<nn::Matrix> inputs(6, nn::Matrix(5, 2)), weights(6, nn::Matrix(3, 2));
  for (auto& m : inputs) m = m.unaryExpr([&](float) { return n01(rng); });
  for (auto& m : weights) m = m.unaryExpr([&](float) { return n01(rng); });

  const std::vector<float> grads = net.backward(net.forward_tape(inputs), weights);
  std::vector<float> params = net.flatten();
  ASSERT_EQ(grads.size(), params.size());
  const float eps = 1e-2f;
  std::size_t checked = 0;
  for (std::size_t i = 0; i < params.size(); i += 3) {
    const float saved = params[i];
    params[i] = saved + eps;
    net.assign(params);
    const double up = weighted_sum(net.forward(inputs), weights);
    params[i] = saved - eps;
    net.assign(params);
    const double down = weighted_sum(net.forward(inputs), weights);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * eps);
    EXPECT_NEAR(grads[i], numeric, 2e-2 * std::max(1.0, std::abs(numeric))) << "parameter " << i;
    ++checked;
  }
  net.assign(params);
  EXPECT_GT(checked, 50u);
}

TEST(Gru, FlattenAssignRoundTrip) {
  nn::GruNetwork net(4, 3, 1, 2);
  std::mt19937_64 rng(8);
  net.initialize(rng);
  const auto p = net.flatten();
  EXPECT_EQ(p.size(), net.parameter_count());
  nn::GruNetwork other(4, 3, 1, 2);
  other.assign(p);
  EXPECT_EQ(other.flatten(), p);
}

// ---------------------------------------------------------------- training

std::vector<MotionCorpusEntry> small_corpus(std::size_t n, std::uint64_t seed) {
  return build_motion_corpus({n, 64, 0.0, seed});
}

TrainingConfig small_config() {
  TrainingConfig cfg;
  cfg.descriptor.hidden_width = 16;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  cfg.seed = 5;
  return cfg;
}

TEST(Training, DeterministicGivenSeed) {
  const auto corpus = small_corpus(10, 1);
  const TrainingResult a = train_velocimeter(corpus, small_config());
  const TrainingResult b = train_velocimeter(corpus, small_config());
  EXPECT_EQ(a.model.parameter_checksum(), b.model.parameter_checksum());
  EXPECT_EQ(a.heldout_mae, b.heldout_mae);
  TrainingConfig other = small_config();
  other.seed = 6;
  EXPECT_NE(train_velocimeter(corpus, other).model.parameter_checksum(), a.model.parameter_checksum());
}

TEST(Training, EmptyCorpusRaises) {
  expect_error([] { train_velocimeter(std::vector<MotionCorpusEntry>{}, small_config()); }, ErrorKind::EmptyCorpus);
}

TEST(Training, StaticCorpusPredictsNearZero) {
  std::vector<MotionCorpusEntry> corpus;
  for (std::uint64_t i = 0; i < 20; ++i) {
    corpus.push_back(corpus_entry_from_motion(generate_motion(MotionKind::Idle, {}, 64, i), "idle"));
  }
  TrainingConfig cfg = small_config();
  cfg.epochs = 4;
  const TrainingResult r = train_velocimeter(corpus, cfg);
  EXPECT_LT(r.heldout_mae, 0.002);
}

TEST(Training, OutputLengthAndFinite) {
  const TrainingResult r = train_velocimeter(small_corpus(10, 2), small_config());
  const GruVelocimeter est(std::make_shared<const VelocimeterModel>(r.model));
  for (const std::size_t k : {2u, 5u, 31u, 32u, 33u, 100u}) {
    const VelocitySequence v = estimate_velocities(est, canonical_seq(k, k)).velocities;
    ASSERT_EQ(v.size(), k - 1);
    for (const auto& x : v.velocities) EXPECT_TRUE(x.allFinite());
  }
}

TEST(ModelFile, SaveLoadIsLossless) {
  const TrainingResult r = train_velocimeter(small_corpus(10, 3), small_config());
  const std::vector<std::uint8_t> bytes = save_model(r.model);
  const VelocimeterModel back = load_model(bytes, &r.model.descriptor);
  EXPECT_EQ(back.parameter_checksum(), r.model.parameter_checksum());
  EXPECT_EQ(back.metadata.corpus_id, r.model.metadata.corpus_id);
  const GruVelocimeter a(std::make_shared<const VelocimeterModel>(r.model));
  const GruVelocimeter b(std::make_shared<const VelocimeterModel>(back));
  const JointSequence seq = canonical_seq(70, 9);
  const auto va = a.estimate(seq), vb = b.estimate(seq);
  for (std::size_t i = 0; i < va.size(); ++i) EXPECT_EQ(va.velocities[i], vb.velocities[i]);
}

TEST(ModelFile, TruncatedOrCorruptRejected) {
  const VelocimeterModel m = VelocimeterModel::create({45, 8, 1, 3});
  std::vector<std::uint8_t> bytes = save_model(m);
  std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + static_cast<long>(bytes.size() / 2));
  expect_error([&] { load_model(cut); }, ErrorKind::CorruptModel);
  std::vector<std::uint8_t> flipped = bytes;
  flipped[flipped.size() / 2] ^= 0x40;
  expect_error([&] { load_model(flipped); }, ErrorKind::CorruptModel);
  std::vector<std::uint8_t> magic = bytes;
  magic[0] = 'X';
  expect_error([&] { load_model(magic); }, ErrorKind::CorruptModel);
}

TEST(ModelFile, ArchitectureMismatch) {
  const VelocimeterModel m = VelocimeterModel::create({45, 128, 2, 3});
  const ArchitectureDescriptor expected{45, 256, 2, 3};
  expect_error([&] { load_model(save_model(m), &expected); }, ErrorKind::ArchitectureMismatch);
  expect_error([] { VelocimeterModel::create({44, 8, 1, 3}); }, ErrorKind::ArchitectureMismatch);
}

TEST(Corpus, EntriesSatisfyInvariants) {
  for (const auto& e : small_corpus(10, 4)) {
    EXPECT_NO_THROW(e.validate());
    EXPECT_EQ(e.velocities.size(), e.joints.size() - 1);
    EXPECT_EQ(e.joints.coordinate_frame(), CoordinateFrame::Canonical);
    for (std::size_t i = 0; i < e.joints.size(); ++i) EXPECT_EQ(e.joints.root(i), Vec3::Zero());
  }
}

}  // namespace
}  // namespace wt_test
