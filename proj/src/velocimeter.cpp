#include "worldtraj/velocimeter.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>

#include "json.hpp"
#include "worldtraj/errors.hpp"
#include "worldtraj/rng.hpp"

namespace worldtraj {

using nn::Matrix;

VelocityEstimate estimate_velocities(const VelocityEstimator& estimator,
                                     const JointSequence& canonical) {
  if (canonical.coordinate_frame() != CoordinateFrame::Canonical) {
    fail(ErrorKind::WrongFrame, "velocity estimation expects canonical joints");
  }
  VelocityEstimate out;
  if (canonical.size() < 2) {
    out.empty_window = true;
    out.velocities.coordinate_frame = CoordinateFrame::Canonical;
    return out;
  }
  out.velocities = estimator.estimate(canonical);
  if (out.velocities.size() != canonical.size() - 1) {
    fail(ErrorKind::LengthMismatch, estimator.name() + " returned the wrong number of velocities");
  }
  out.velocities.coordinate_frame = CoordinateFrame::Canonical;
  return out;
}

// ---------------------------------------------------------------- oracle

OracleVelocimeter::OracleVelocimeter(VelocitySequence canonical_velocities)
    : velocities_(std::move(canonical_velocities)) {
  if (velocities_.coordinate_frame != CoordinateFrame::Canonical) {
    fail(ErrorKind::WrongFrame, "oracle velocities must be canonical");
  }
}

OracleVelocimeter OracleVelocimeter::from_ground_truth(const std::vector<Vec3>& world_roots,
                                                       const Rotation3& root_orientation_frame0) {
  return OracleVelocimeter(rotate_velocities(difference_positions(world_roots),
                                             root_orientation_frame0.inverse(),
                                             CoordinateFrame::Canonical));
}

VelocitySequence OracleVelocimeter::estimate(const JointSequence& canonical) const {
  if (canonical.size() != velocities_.size() + 1) {
    fail(ErrorKind::LengthMismatch, "oracle velocities do not cover this joint sequence");
  }
  return velocities_;
}

// ---------------------------------------------------------------- model

namespace {

std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n,
                    std::uint64_t h = 1469598103934665603ull) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

void fill_input_column(const JointFrame& frame, Matrix& x, Eigen::Index col) {
  for (std::size_t j = 0; j < kNumJoints; ++j) {
    for (int c = 0; c < 3; ++c) x(static_cast<Eigen::Index>(3 * j + c), col) = static_cast<float>(frame[j](c));
  }
}

}  // namespace

VelocimeterModel VelocimeterModel::create(const ArchitectureDescriptor& d) {
  if (d.input_width != static_cast<int>(kNumJoints * 3) || d.output_width != 3) {
    fail(ErrorKind::ArchitectureMismatch, "velocimeter input width must be 45 and output width 3");
  }
  VelocimeterModel m;
  m.descriptor = d;
  m.network = nn::GruNetwork(d.input_width, d.hidden_width, d.layers, d.output_width);
  return m;
}

std::uint64_t VelocimeterModel::parameter_checksum() const {
  const std::vector<float> p = network.flatten();
  return fnv1a(reinterpret_cast<const std::uint8_t*>(p.data()), p.size() * sizeof(float));
}

GruVelocimeter::GruVelocimeter(std::shared_ptr<const VelocimeterModel> model)
    : model_(std::move(model)) {
  if (!model_) fail(ErrorKind::InvalidArgument, "GruVelocimeter needs a model");
}

VelocitySequence GruVelocimeter::estimate(const JointSequence& canonical) const {
  VelocitySequence out;
  out.coordinate_frame = CoordinateFrame::Canonical;
  const std::size_t k = canonical.size();
  if (k < 2) return out;
  const std::size_t window = static_cast<std::size_t>(std::max(2, model_->metadata.window));
  const std::size_t len = std::min(window, k);
  const std::size_t stride = std::max<std::size_t>(1, len / 2);

  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + len <= k; s += stride) starts.push_back(s);
  if (starts.back() + len < k) starts.push_back(k - len);

  std::vector<Matrix> inputs(len, Matrix(model_->descriptor.input_width,
                                         static_cast<Eigen::Index>(starts.size())));
  for (std::size_t b = 0; b < starts.size(); ++b) {
    for (std::size_t t = 0; t < len; ++t) {
      fill_input_column(canonical[starts[b] + t], inputs[t], static_cast<Eigen::Index>(b));
    }
  }
  const std::vector<Matrix> outputs = model_->network.forward(inputs);

  out.velocities.resize(k - 1);
  const double inv_scale = 1.0 / model_->output_scale;
  std::size_t b = 0;
  for (std::size_t i = 1; i < k; ++i) {
    // Earliest window that still contains frame i has the most history.
    while (starts[b] + len <= i) ++b;
    const std::size_t t = i - starts[b];
    const auto col = outputs[t].col(static_cast<Eigen::Index>(b));
    out.velocities[i - 1] = Vec3(col(0), col(1), col(2)) * inv_scale;
  }
  return out;
}

void MotionCorpusEntry::validate() const {
  if (joints.coordinate_frame() != CoordinateFrame::Canonical) {
    fail(ErrorKind::WrongFrame, "corpus joints must be canonical");
  }
  if (velocities.size() + 1 != joints.size()) {
    fail(ErrorKind::InvalidArgument, "corpus entry velocity length must be K-1");
  }
  for (const auto& v : velocities.velocities) {
    if (!v.allFinite()) fail(ErrorKind::InvalidArgument, "corpus entry has non-finite velocity");
  }
}

double velocity_mae(const VelocitySequence& estimate, const VelocitySequence& truth) {
  if (estimate.size() != truth.size()) fail(ErrorKind::LengthMismatch, "velocity_mae: length mismatch");
  if (truth.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    acc += (estimate.velocities[i] - truth.velocities[i]).cwiseAbs().sum();
  }
  return acc / (3.0 * static_cast<double>(truth.size()));
}

// ---------------------------------------------------------------- training

namespace {

struct Window {
  std::size_t entry;
  std::size_t start;
};

}  // namespace

TrainingResult train_velocimeter(std::span<const MotionCorpusEntry> corpus,
                                 const TrainingConfig& config) {
  if (corpus.empty()) fail(ErrorKind::EmptyCorpus, "training corpus is empty");
  for (const auto& e : corpus) e.validate();
  if (config.window < 2 || config.batch_size < 1 || config.epochs < 1) {
    fail(ErrorKind::InvalidArgument, "invalid training configuration");
  }

  SplitRng rng(config.seed);
  std::mt19937_64 split_rng = rng.stream("split");
  std::mt19937_64 init_rng = rng.stream("init");
  std::mt19937_64 shuffle_rng = rng.stream("shuffle");

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), split_rng);
  std::size_t n_heldout = static_cast<std::size_t>(std::floor(config.heldout_fraction * corpus.size()));
  if (corpus.size() >= 2) n_heldout = std::clamp<std::size_t>(n_heldout, 1, corpus.size() - 1);
  else n_heldout = 0;
  std::vector<std::size_t> heldout(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_heldout));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_heldout), order.end());
  std::sort(heldout.begin(), heldout.end());

  const std::size_t w = static_cast<std::size_t>(config.window);
  const std::size_t stride = static_cast<std::size_t>(std::max(1, config.window_stride));
  std::vector<Window> windows;
  for (std::size_t e : train) {
    const std::size_t k = corpus[e].joints.size();
    if (k < w) continue;
    std::size_t s = 0;
    for (; s + w <= k; s += stride) windows.push_back({e, s});
    if (s - stride + w < k) windows.push_back({e, k - w});
  }
  if (windows.empty()) fail(ErrorKind::EmptyCorpus, "no training sequence is as long as one window");

  VelocimeterModel model = VelocimeterModel::create(config.descriptor);
  model.metadata.window = config.window;
  model.network.initialize(init_rng);
  std::vector<float> params = model.network.flatten();
  nn::Adam adam(params.size());

  const float out_scale = static_cast<float>(model.output_scale);
  const Eigen::Index in_w = config.descriptor.input_width;
  TrainingResult result;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double lr = config.learning_rate *
                      std::pow(config.lr_decay_gamma, epoch / std::max(1, config.lr_decay_every));
    std::shuffle(windows.begin(), windows.end(), shuffle_rng);
    double loss_sum = 0.0;
    std::size_t loss_batches = 0;
    for (std::size_t b0 = 0; b0 < windows.size(); b0 += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t b1 = std::min(windows.size(), b0 + static_cast<std::size_t>(config.batch_size));
      const auto batch = static_cast<Eigen::Index>(b1 - b0);
      std::vector<Matrix> inputs(w, Matrix(in_w, batch));
      std::vector<Matrix> targets(w, Matrix::Zero(3, batch));
      for (std::size_t bi = b0; bi < b1; ++bi) {
        const auto col = static_cast<Eigen::Index>(bi - b0);
        const MotionCorpusEntry& e = corpus[windows[bi].entry];
        const std::size_t s = windows[bi].start;
        for (std::size_t t = 0; t < w; ++t) {
          fill_input_column(e.joints[s + t], inputs[t], col);
          if (t > 0) {
            const Vec3& v = e.velocities.velocities[s + t - 1];
            targets[t].col(col) = (v * static_cast<double>(out_scale)).cast<float>();
          }
        }
      }
      model.network.assign(params);
      const auto tape = model.network.forward_tape(inputs);
      // Step 0 of a window has no previous frame in view: unsupervised.
      const double denom = static_cast<double>(batch) * static_cast<double>(w - 1) * 3.0;
      double loss = 0.0;
      std::vector<Matrix> d_out(w, Matrix::Zero(3, batch));
      for (std::size_t t = 1; t < w; ++t) {
        const Matrix diff = tape.outputs[t] - targets[t];
        loss += static_cast<double>(diff.squaredNorm());
        d_out[t] = diff * static_cast<float>(2.0 / denom);
      }
      loss /= denom;
      if (!std::isfinite(loss)) fail(ErrorKind::NonFiniteLoss, "training diverged");
      std::vector<float> grads = model.network.backward(tape, d_out);
      double gnorm = 0.0;
      for (float g : grads) gnorm += static_cast<double>(g) * g;
      gnorm = std::sqrt(gnorm);
      if (!std::isfinite(gnorm)) fail(ErrorKind::NonFiniteLoss, "non-finite gradient");
      if (config.gradient_clip > 0.0 && gnorm > config.gradient_clip) {
        const float k = static_cast<float>(config.gradient_clip / gnorm);
        for (float& g : grads) g *= k;
      }
      adam.step(params, grads, lr);
      loss_sum += loss;
      ++loss_batches;
    }
    const double epoch_loss = loss_sum / static_cast<double>(std::max<std::size_t>(1, loss_batches));
    result.epoch_losses.push_back(epoch_loss);
    if (config.verbose) {
      std::cerr << "epoch " << epoch + 1 << "/" << config.epochs << " lr " << lr << " loss "
                << epoch_loss << "\n";
    }
  }
  model.network.assign(params);

  // Held-out evaluation; with a single entry fall back to the training data.
  const std::vector<std::size_t>& eval_set = heldout.empty() ? train : heldout;
  auto shared = std::make_shared<const VelocimeterModel>(model);
  GruVelocimeter estimator(shared);
  double abs_sum = 0.0;
  double speed_sum = 0.0;
  std::size_t count = 0;
  for (std::size_t e : eval_set) {
    const auto est = estimator.estimate(corpus[e].joints);
    const auto& gt = corpus[e].velocities;
    for (std::size_t i = 0; i < gt.size(); ++i) {
      abs_sum += (est.velocities[i] - gt.velocities[i]).cwiseAbs().sum() / 3.0;
      speed_sum += gt.velocities[i].norm();
      ++count;
    }
  }
  result.heldout_mae = count ? abs_sum / static_cast<double>(count) : 0.0;
  result.heldout_mean_speed = count ? speed_sum / static_cast<double>(count) : 0.0;
  result.heldout_indices = heldout;

  model.metadata.corpus_id = config.corpus_id;
  model.metadata.epochs = config.epochs;
  model.metadata.final_loss = result.epoch_losses.back();
  model.metadata.heldout_mae = result.heldout_mae;
  model.metadata.heldout_mean_speed = result.heldout_mean_speed;
  model.metadata.seed = config.seed;
  model.metadata.window = config.window;
  result.model = std::move(model);
  return result;
}

// ---------------------------------------------------------------- serialization

namespace {

constexpr char kModelMagic[8] = {'W', 'T', 'V', 'E', 'L', 'M', 'D', 'L'};
constexpr std::uint32_t kModelVersion = 1;

class Writer {
 public:
  template <typename T>
  void put(T v) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    // Host is little-endian on every supported target; see docs/formats.md.
    bytes.insert(bytes.end(), raw, raw + sizeof(T));
  }
  void put_bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes.insert(bytes.end(), b, b + n);
  }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}
  template <typename T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) fail(ErrorKind::CorruptModel, "model file is truncated");
  }
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

nlohmann::json metadata_to_json(const TrainingMetadata& m) {
  return {{"corpus_id", m.corpus_id},   {"epochs", m.epochs},
          {"final_loss", m.final_loss}, {"heldout_mae", m.heldout_mae},
          {"heldout_mean_speed", m.heldout_mean_speed},
          {"seed", m.seed},             {"loss", m.loss},
          {"window", m.window}};
}

TrainingMetadata metadata_from_json(const nlohmann::json& j) {
  TrainingMetadata m;
  m.corpus_id = j.value("corpus_id", "");
  m.epochs = j.value("epochs", 0);
  m.final_loss = j.value("final_loss", 0.0);
  m.heldout_mae = j.value("heldout_mae", 0.0);
  m.heldout_mean_speed = j.value("heldout_mean_speed", 0.0);
  m.seed = j.value("seed", std::uint64_t{0});
  m.loss = j.value("loss", "mse");
  m.window = j.value("window", 32);
  return m;
}

}  // namespace

std::vector<std::uint8_t> save_model(const VelocimeterModel& model) {
  Writer w;
  w.put_bytes(kModelMagic, sizeof(kModelMagic));
  w.put<std::uint32_t>(kModelVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.descriptor.input_width));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.descriptor.hidden_width));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.descriptor.layers));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.descriptor.output_width));
  w.put<double>(model.output_scale);
  const std::string meta = metadata_to_json(model.metadata).dump();
  w.put<std::uint32_t>(static_cast<std::uint32_t>(meta.size()));
  w.put_bytes(meta.data(), meta.size());
  const std::vector<float> params = model.network.flatten();
  w.put<std::uint64_t>(params.size());
  w.put_bytes(params.data(), params.size() * sizeof(float));
  w.put<std::uint64_t>(fnv1a(w.bytes.data(), w.bytes.size()));
  return std::move(w.bytes);
}

VelocimeterModel load_model(std::span<const std::uint8_t> bytes,
                            const ArchitectureDescriptor* expected) {
  Reader r(bytes);
  const auto magic = r.take(sizeof(kModelMagic));
  if (std::memcmp(magic.data(), kModelMagic, sizeof(kModelMagic)) != 0) {
    fail(ErrorKind::CorruptModel, "not a velocimeter model file");
  }
  const auto version = r.get<std::uint32_t>();
  if (version != kModelVersion) {
    fail(ErrorKind::UnsupportedVersion, "unsupported model version " + std::to_string(version));
  }
  ArchitectureDescriptor d;
  d.input_width = static_cast<int>(r.get<std::uint32_t>());
  d.hidden_width = static_cast<int>(r.get<std::uint32_t>());
  d.layers = static_cast<int>(r.get<std::uint32_t>());
  d.output_width = static_cast<int>(r.get<std::uint32_t>());
  const double output_scale = r.get<double>();
  const auto meta_len = r.get<std::uint32_t>();
  const auto meta_bytes = r.take(meta_len);
  const auto n_params = r.get<std::uint64_t>();
  if (n_params > bytes.size()) fail(ErrorKind::CorruptModel, "model file is truncated");
  const auto param_bytes = r.take(static_cast<std::size_t>(n_params) * sizeof(float));
  const std::size_t body = r.pos();
  const auto checksum = r.get<std::uint64_t>();
  if (checksum != fnv1a(bytes.data(), body)) fail(ErrorKind::CorruptModel, "model checksum mismatch");
  if (r.pos() != bytes.size()) fail(ErrorKind::CorruptModel, "trailing bytes after model");

  if (expected && !(*expected == d)) {
    fail(ErrorKind::ArchitectureMismatch, "model architecture differs from the requested descriptor");
  }
  if (d.hidden_width <= 0 || d.layers <= 0 || d.hidden_width > (1 << 16) || d.layers > 64) {
    fail(ErrorKind::CorruptModel, "implausible architecture descriptor");
  }
  VelocimeterModel m = VelocimeterModel::create(d);
  if (m.network.parameter_count() != n_params) {
    fail(ErrorKind::ArchitectureMismatch, "parameter count does not match the descriptor");
  }
  std::vector<float> params(static_cast<std::size_t>(n_params));
  std::memcpy(params.data(), param_bytes.data(), param_bytes.size());
  m.network.assign(params);
  m.output_scale = output_scale;
  try {
    m.metadata = metadata_from_json(nlohmann::json::parse(meta_bytes.begin(), meta_bytes.end()));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::CorruptModel, std::string("bad model metadata: ") + e.what());
  }
  return m;
}

void save_model_file(const VelocimeterModel& model, const std::string& path) {
  const auto bytes = save_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

VelocimeterModel load_model_file(const std::string& path, const ArchitectureDescriptor* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return load_model(bytes, expected);
}

}  // namespace worldtraj
