#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "worldtraj/canonical.hpp"
#include "worldtraj/gru.hpp"
#include "worldtraj/skeleton.hpp"

namespace worldtraj {

/// Maps a canonical joint sequence (K frames) to K-1 canonical root
/// displacements. Implementations must be safe for concurrent const calls.
class VelocityEstimator {
 public:
  virtual ~VelocityEstimator() = default;
  virtual VelocitySequence estimate(const JointSequence& canonical) const = 0;
  virtual std::string name() const = 0;
};

struct VelocityEstimate {
  VelocitySequence velocities;
  bool empty_window = false;  ///< K < 2, nothing to estimate
};

/// Checks the frame, short-circuits K < 2, and enforces the K-1 length.
VelocityEstimate estimate_velocities(const VelocityEstimator& estimator,
                                     const JointSequence& canonical);

/// Returns pre-computed ground-truth canonical velocities.
class OracleVelocimeter final : public VelocityEstimator {
 public:
  explicit OracleVelocimeter(VelocitySequence canonical_velocities);

  /// Canonical velocities from a ground-truth world root track and the
  /// ground-truth frame-0 root orientation in the same world frame.
  static OracleVelocimeter from_ground_truth(const std::vector<Vec3>& world_roots,
                                             const Rotation3& root_orientation_frame0);

  VelocitySequence estimate(const JointSequence& canonical) const override;
  std::string name() const override { return "oracle"; }

 private:
  VelocitySequence velocities_;
};

struct ArchitectureDescriptor {
  int input_width = static_cast<int>(kNumJoints * 3);
  int hidden_width = 256;
  int layers = 2;
  int output_width = 3;

  friend bool operator==(const ArchitectureDescriptor&, const ArchitectureDescriptor&) = default;
};

struct TrainingMetadata {
  std::string corpus_id;
  int epochs = 0;
  double final_loss = 0.0;
  double heldout_mae = 0.0;      ///< m/frame
  double heldout_mean_speed = 0.0;  ///< m/frame
  std::uint64_t seed = 0;
  std::string loss = "mse";
  int window = 32;
};

/// Recurrent regressor plus the fixed output scaling it was trained with.
struct VelocimeterModel {
  ArchitectureDescriptor descriptor;
  nn::GruNetwork network;
  /// Network outputs are velocities in meters per frame times this factor.
  double output_scale = 30.0;
  TrainingMetadata metadata;

  static VelocimeterModel create(const ArchitectureDescriptor& descriptor);
  /// FNV-1a over the parameter bytes; stable across save/load.
  std::uint64_t parameter_checksum() const;
};

/// Sliding-window inference with the learned model. Windows of `window`
/// frames overlap by half; each velocity is taken from the window position
/// with the longest preceding context.
class GruVelocimeter final : public VelocityEstimator {
 public:
  explicit GruVelocimeter(std::shared_ptr<const VelocimeterModel> model);

  VelocitySequence estimate(const JointSequence& canonical) const override;
  std::string name() const override { return "gru"; }
  const VelocimeterModel& model() const { return *model_; }

 private:
  std::shared_ptr<const VelocimeterModel> model_;
};

struct MotionCorpusEntry {
  JointSequence joints;          ///< canonical
  VelocitySequence velocities;   ///< canonical, K-1
  std::string label;

  /// Throws InvalidArgument when the entry violates its invariants.
  void validate() const;
};

struct TrainingConfig {
  ArchitectureDescriptor descriptor;
  int epochs = 8;
  int batch_size = 32;
  int window = 32;
  int window_stride = 16;
  double learning_rate = 1e-3;
  double lr_decay_gamma = 0.1;
  int lr_decay_every = 2;
  double gradient_clip = 5.0;
  double heldout_fraction = 0.2;
  std::uint64_t seed = 0;
  std::string corpus_id = "synthetic-default";
  bool verbose = false;
};

struct TrainingResult {
  VelocimeterModel model;
  double heldout_mae = 0.0;         ///< mean |v_est - v_gt| per component, m/frame
  double heldout_mean_speed = 0.0;  ///< mean |v_gt|, m/frame
  std::vector<double> epoch_losses;
  std::vector<std::size_t> heldout_indices;
};

/// Deterministic given config.seed. Throws EmptyCorpus or NonFiniteLoss.
TrainingResult train_velocimeter(std::span<const MotionCorpusEntry> corpus,
                                 const TrainingConfig& config);

/// Mean absolute per-component velocity error, m/frame.
double velocity_mae(const VelocitySequence& estimate, const VelocitySequence& truth);

std::vector<std::uint8_t> save_model(const VelocimeterModel& model);
/// Throws CorruptModel on bad magic, truncation, or checksum mismatch;
/// ArchitectureMismatch when `expected` is given and differs.
VelocimeterModel load_model(std::span<const std::uint8_t> bytes,
                            const ArchitectureDescriptor* expected = nullptr);

void save_model_file(const VelocimeterModel& model, const std::string& path);
VelocimeterModel load_model_file(const std::string& path,
                                 const ArchitectureDescriptor* expected = nullptr);

}  // namespace worldtraj
