#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mcg/numerics/matrix.hpp"
#include "mcg/numerics/parameter.hpp"

namespace mcg {

enum class Activation { kRelu, kTanh, kIdentity };

Activation parse_activation(std::string_view name);
std::string_view to_string(Activation a);

Matrix activate(Activation a, const Matrix& pre);
// Gradient w.r.t. the pre-activation, computed from the activation output.
Matrix activate_backward(Activation a, const Matrix& out, const Matrix& upstream);

Matrix sigmoid(const Matrix& x);

// Layers keep a LIFO stack of forward activations. Every recorded forward
// must be matched by exactly one backward, in reverse order. Recording can be
// switched off for inference-only passes (target networks, action selection).
class Linear {
 public:
  Linear() = default;
  Linear(std::string name, std::size_t in, std::size_t out, Rng& rng);

  // x·W + b, with b broadcast to every row.
  Matrix forward(const Matrix& x);
  // Accumulates dW and db; returns dL/dx. Throws StateError without a cached
  // forward.
  Matrix backward(const Matrix& upstream);

  std::size_t in_features() const { return weight_.value.rows(); }
  std::size_t out_features() const { return weight_.value.cols(); }

  Parameter& weight() { return weight_; }
  Parameter& bias() { return bias_; }
  const Parameter& weight() const { return weight_; }
  const Parameter& bias() const { return bias_; }
  ParameterList parameters() { return {&weight_, &bias_}; }

  void set_recording(bool on) { recording_ = on; }
  std::size_t cached() const { return inputs_.size(); }
  void clear_cache() { inputs_.clear(); }

 private:
  Parameter weight_;
  Parameter bias_;
  std::vector<Matrix> inputs_;
  bool recording_ = true;
};

// Gated recurrent unit with sigmoid reset/update gates and a tanh candidate:
//   r = σ(x·Wx_r + bx_r + h·Wh_r + bh_r)
//   z = σ(x·Wx_z + bx_z + h·Wh_z + bh_z)
//   n = tanh(x·Wx_n + bx_n + r ⊙ (h·Wh_n + bh_n))
//   h' = (1 − z) ⊙ n + z ⊙ h
// Gate blocks are stored side by side as [r | z | n] along the columns.
class GruCell {
 public:
  GruCell() = default;
  GruCell(std::string name, std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

  Matrix forward(const Matrix& x, const Matrix& h_prev);

  struct Grads {
    Matrix dx;
    Matrix dh_prev;
  };
  Grads backward(const Matrix& dh);

  std::size_t input_dim() const { return w_x_.value.rows(); }
  std::size_t hidden_dim() const { return w_h_.value.rows(); }

  Parameter& w_x() { return w_x_; }
  Parameter& w_h() { return w_h_; }
  Parameter& b_x() { return b_x_; }
  Parameter& b_h() { return b_h_; }
  ParameterList parameters() { return {&w_x_, &w_h_, &b_x_, &b_h_}; }

  void set_recording(bool on) { recording_ = on; }
  std::size_t cached() const { return cache_.size(); }
  void clear_cache() { cache_.clear(); }

 private:
  struct StepCache {
    Matrix x, h_prev, r, z, n, hn;
  };

  Parameter w_x_;
  Parameter w_h_;
  Parameter b_x_;
  Parameter b_h_;
  std::vector<StepCache> cache_;
  bool recording_ = true;
};

}  // namespace mcg
