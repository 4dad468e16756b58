#include "worldtraj/gru.hpp"

#include <cmath>

#include "worldtraj/errors.hpp"

namespace worldtraj::nn {

namespace {

Matrix sigmoid(const Matrix& x) {
  return x.unaryExpr([](float v) { return 1.0f / (1.0f + std::exp(-v)); });
}

Matrix tanh_m(const Matrix& x) {
  return x.unaryExpr([](float v) { return std::tanh(v); });
}

template <typename Visit>
void for_each_block(std::vector<GruLayer>& layers, Matrix& w_out, Vector& b_out, Visit&& visit) {
  for (auto& l : layers) {
    visit(l.w_input.data(), l.w_input.size());
    visit(l.w_hidden.data(), l.w_hidden.size());
    visit(l.b_input.data(), l.b_input.size());
    visit(l.b_hidden.data(), l.b_hidden.size());
  }
  visit(w_out.data(), w_out.size());
  visit(b_out.data(), b_out.size());
}

}  // namespace

GruNetwork::GruNetwork(int input_width, int hidden_width, int layers, int output_width)
    : input_width_(input_width), hidden_width_(hidden_width), output_width_(output_width) {
  if (input_width <= 0 || hidden_width <= 0 || layers <= 0 || output_width <= 0) {
    fail(ErrorKind::InvalidArgument, "GRU dimensions must be positive");
  }
  const int h3 = 3 * hidden_width;
  for (int l = 0; l < layers; ++l) {
    const int in = l == 0 ? input_width : hidden_width;
    layers_.push_back({Matrix::Zero(h3, in), Matrix::Zero(h3, hidden_width), Vector::Zero(h3),
                       Vector::Zero(h3)});
  }
  w_out_ = Matrix::Zero(output_width, hidden_width);
  b_out_ = Vector::Zero(output_width);
}

void GruNetwork::initialize(std::mt19937_64& rng) {
  const float k = 1.0f / std::sqrt(static_cast<float>(hidden_width_));
  std::uniform_real_distribution<float> dist(-k, k);
  for_each_block(layers_, w_out_, b_out_, [&](float* p, Eigen::Index n) {
    for (Eigen::Index i = 0; i < n; ++i) p[i] = dist(rng);
  });
}

std::size_t GruNetwork::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) {
    n += l.w_input.size() + l.w_hidden.size() + l.b_input.size() + l.b_hidden.size();
  }
  return n + w_out_.size() + b_out_.size();
}

std::vector<float> GruNetwork::flatten() const {
  std::vector<float> out;
  out.reserve(parameter_count());
  auto& self = const_cast<GruNetwork&>(*this);
  for_each_block(self.layers_, self.w_out_, self.b_out_, [&](float* p, Eigen::Index n) {
    out.insert(out.end(), p, p + n);
  });
  return out;
}

void GruNetwork::assign(const std::vector<float>& params) {
  if (params.size() != parameter_count()) {
    fail(ErrorKind::ArchitectureMismatch, "parameter count does not match the network");
  }
  std::size_t offset = 0;
  for_each_block(layers_, w_out_, b_out_, [&](float* p, Eigen::Index n) {
    std::copy(params.begin() + static_cast<std::ptrdiff_t>(offset),
              params.begin() + static_cast<std::ptrdiff_t>(offset + n), p);
    offset += static_cast<std::size_t>(n);
  });
}

GruNetwork::Tape GruNetwork::forward_tape(const std::vector<Matrix>& inputs) const {
  const int hd = hidden_width_;
  const std::size_t steps = inputs.size();
  Tape tape;
  const std::size_t nl = layers_.size();
  tape.layer_inputs.resize(nl);
  tape.h.resize(nl);
  tape.r.resize(nl);
  tape.z.resize(nl);
  tape.n.resize(nl);
  tape.hn.resize(nl);
  if (steps == 0) return tape;
  const Eigen::Index batch = inputs.front().cols();

  std::vector<Matrix> next;
  for (std::size_t l = 0; l < nl; ++l) {
    const GruLayer& layer = layers_[l];
    tape.layer_inputs[l] = l == 0 ? inputs : next;
    const std::vector<Matrix>& current = tape.layer_inputs[l];
    auto& hs = tape.h[l];
    hs.reserve(steps + 1);
    hs.push_back(Matrix::Zero(hd, batch));
    for (std::size_t t = 0; t < steps; ++t) {
      const Matrix& x = current[t];
      const Matrix& h_prev = hs.back();
      Matrix gi = layer.w_input * x;
      gi.colwise() += layer.b_input;
      Matrix gh = layer.w_hidden * h_prev;
      gh.colwise() += layer.b_hidden;
      Matrix r = sigmoid(gi.topRows(hd) + gh.topRows(hd));
      Matrix z = sigmoid(gi.middleRows(hd, hd) + gh.middleRows(hd, hd));
      Matrix hn = gh.bottomRows(hd);
      Matrix n = tanh_m(gi.bottomRows(hd) + r.cwiseProduct(hn));
      Matrix h = (Matrix::Ones(hd, batch) - z).cwiseProduct(n) + z.cwiseProduct(h_prev);
      tape.r[l].push_back(std::move(r));
      tape.z[l].push_back(std::move(z));
      tape.n[l].push_back(std::move(n));
      tape.hn[l].push_back(std::move(hn));
      hs.push_back(std::move(h));
    }
    // Next layer consumes h[1..steps].
    next.assign(hs.begin() + 1, hs.end());
    if (l + 1 == nl) {
      tape.outputs.reserve(steps);
      for (std::size_t t = 0; t < steps; ++t) {
        Matrix y = w_out_ * next[t];
        y.colwise() += b_out_;
        tape.outputs.push_back(std::move(y));
      }
    }
  }
  return tape;
}

std::vector<Matrix> GruNetwork::forward(const std::vector<Matrix>& inputs) const {
  return forward_tape(inputs).outputs;
}

std::vector<float> GruNetwork::backward(const Tape& tape, const std::vector<Matrix>& d_outputs) const {
  const int hd = hidden_width_;
  const std::size_t steps = d_outputs.size();
  const std::size_t nl = layers_.size();

  std::vector<GruLayer> grads;
  grads.reserve(nl);
  for (const auto& l : layers_) {
    grads.push_back({Matrix::Zero(l.w_input.rows(), l.w_input.cols()),
                     Matrix::Zero(l.w_hidden.rows(), l.w_hidden.cols()),
                     Vector::Zero(l.b_input.size()), Vector::Zero(l.b_hidden.size())});
  }
  Matrix g_w_out = Matrix::Zero(w_out_.rows(), w_out_.cols());
  Vector g_b_out = Vector::Zero(b_out_.size());

  // Gradient w.r.t. the top layer's hidden outputs, per step.
  std::vector<Matrix> d_above(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    const Matrix& h_top = tape.h[nl - 1][t + 1];
    g_w_out.noalias() += d_outputs[t] * h_top.transpose();
    g_b_out += d_outputs[t].rowwise().sum();
    d_above[t] = w_out_.transpose() * d_outputs[t];
  }

  for (std::size_t li = nl; li-- > 0;) {
    const GruLayer& layer = layers_[li];
    GruLayer& g = grads[li];
    std::vector<Matrix> d_below(steps);
    const Eigen::Index batch = steps ? d_above[0].cols() : 0;
    Matrix d_carry = Matrix::Zero(hd, batch);
    Matrix dgi(3 * hd, batch);
    Matrix dgh(3 * hd, batch);
    for (std::size_t t = steps; t-- > 0;) {
      const Matrix& r = tape.r[li][t];
      const Matrix& z = tape.z[li][t];
      const Matrix& n = tape.n[li][t];
      const Matrix& hn = tape.hn[li][t];
      const Matrix& h_prev = tape.h[li][t];
      const Matrix& x = tape.layer_inputs[li][t];

      const Matrix dh = d_above[t] + d_carry;
      const Matrix dn_pre =
          dh.cwiseProduct(Matrix::Ones(hd, batch) - z).cwiseProduct(Matrix::Ones(hd, batch) - n.cwiseProduct(n));
      const Matrix dz_pre = dh.cwiseProduct(h_prev - n).cwiseProduct(z.cwiseProduct(Matrix::Ones(hd, batch) - z));
      const Matrix dr_pre = dn_pre.cwiseProduct(hn).cwiseProduct(r.cwiseProduct(Matrix::Ones(hd, batch) - r));

      dgi.topRows(hd) = dr_pre;
      dgi.middleRows(hd, hd) = dz_pre;
      dgi.bottomRows(hd) = dn_pre;
      dgh.topRows(hd) = dr_pre;
      dgh.middleRows(hd, hd) = dz_pre;
      dgh.bottomRows(hd) = dn_pre.cwiseProduct(r);

      g.w_input.noalias() += dgi * x.transpose();
      g.b_input += dgi.rowwise().sum();
      g.w_hidden.noalias() += dgh * h_prev.transpose();
      g.b_hidden += dgh.rowwise().sum();

      if (li > 0) d_below[t] = layer.w_input.transpose() * dgi;
      d_carry = dh.cwiseProduct(z);
      d_carry.noalias() += layer.w_hidden.transpose() * dgh;
    }
    d_above = std::move(d_below);
  }

  std::vector<float> out;
  out.reserve(parameter_count());
  for_each_block(grads, g_w_out, g_b_out, [&](float* p, Eigen::Index n) {
    out.insert(out.end(), p, p + n);
  });
  return out;
}

Adam::Adam(std::size_t n, double beta1, double beta2, double eps)
    : m_(n, 0.0), v_(n, 0.0), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void Adam::step(std::vector<float>& params, const std::vector<float>& grads, double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= static_cast<float>(lr * m_hat / (std::sqrt(v_hat) + eps_));
  }
}

}  // namespace worldtraj::nn
