#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <vector>

namespace worldtraj::nn {

using Matrix = Eigen::MatrixXf;
using Vector = Eigen::VectorXf;

/// Gate order within the stacked 3H rows is (reset, update, candidate), the
/// same layout PyTorch uses for nn.GRU.
struct GruLayer {
  Matrix w_input;   ///< 3H x in
  Matrix w_hidden;  ///< 3H x H
  Vector b_input;   ///< 3H
  Vector b_hidden;  ///< 3H
};

/// Stacked GRU followed by a linear head applied at every time step.
class GruNetwork {
 public:
  GruNetwork() = default;
  GruNetwork(int input_width, int hidden_width, int layers, int output_width);

  int input_width() const { return input_width_; }
  int hidden_width() const { return hidden_width_; }
  int layers() const { return static_cast<int>(layers_.size()); }
  int output_width() const { return output_width_; }

  /// Uniform(-1/sqrt(H), 1/sqrt(H)) for every parameter.
  void initialize(std::mt19937_64& rng);

  std::size_t parameter_count() const;
  std::vector<float> flatten() const;
  void assign(const std::vector<float>& params);

  /// inputs[t] is (input_width x batch); returns outputs[t] (output_width x batch).
  std::vector<Matrix> forward(const std::vector<Matrix>& inputs) const;

  /// Forward pass that keeps the activations backward() needs.
  struct Tape {
    std::vector<std::vector<Matrix>> layer_inputs;  // [layer][t]
    std::vector<std::vector<Matrix>> h;             // [layer][t+1], h[l][0] = 0
    std::vector<std::vector<Matrix>> r, z, n, hn;   // [layer][t]
    std::vector<Matrix> outputs;
  };
  Tape forward_tape(const std::vector<Matrix>& inputs) const;

  /// Gradients flattened in the same order as flatten().
  std::vector<float> backward(const Tape& tape, const std::vector<Matrix>& d_outputs) const;

 private:
  int input_width_ = 0;
  int hidden_width_ = 0;
  int output_width_ = 0;
  std::vector<GruLayer> layers_;
  Matrix w_out_;
  Vector b_out_;
};

/// Adam with bias correction over a flat parameter vector.
class Adam {
 public:
  explicit Adam(std::size_t n, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
  void step(std::vector<float>& params, const std::vector<float>& grads, double lr);

 private:
  std::vector<double> m_, v_;
  double beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
};

}  // namespace worldtraj::nn
