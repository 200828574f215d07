#include "mcg/numerics/layers.hpp"

#include <cmath>

#include "mcg/errors.hpp"

namespace mcg {

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw ArgumentError("unknown activation '" + std::string(name) + "'");
}

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

Matrix activate(Activation a, const Matrix& pre) {
  Matrix out = pre;
  switch (a) {
    case Activation::kRelu:
      for (auto& v : out.data()) v = v > 0.0 ? v : 0.0;
      break;
    case Activation::kTanh:
      for (auto& v : out.data()) v = std::tanh(v);
      break;
    case Activation::kIdentity:
      break;
  }
  return out;
}

Matrix activate_backward(Activation a, const Matrix& out, const Matrix& upstream) {
  if (!out.same_shape(upstream)) {
    throw DimensionError("activate_backward: " + out.shape_string() + " vs " +
                         upstream.shape_string());
  }
  Matrix g = upstream;
  auto gd = g.data();
  auto od = out.data();
  switch (a) {
    case Activation::kRelu:
      for (std::size_t i = 0; i < gd.size(); ++i) {
        if (od[i] <= 0.0) gd[i] = 0.0;
      }
      break;
    case Activation::kTanh:
      for (std::size_t i = 0; i < gd.size(); ++i) gd[i] *= 1.0 - od[i] * od[i];
      break;
    case Activation::kIdentity:
      break;
  }
  return g;
}

Matrix sigmoid(const Matrix& x) {
  Matrix out = x;
  for (auto& v : out.data()) v = 1.0 / (1.0 + std::exp(-v));
  return out;
}

// ---------------------------------------------------------------------------

Linear::Linear(std::string name, std::size_t in, std::size_t out, Rng& rng)
    : weight_(name + ".weight", glorot_uniform(in, out, rng)),
      bias_(name + ".bias", Matrix(1, out)) {}

Matrix Linear::forward(const Matrix& x) {
  if (x.cols() != in_features()) {
    throw DimensionError("Linear::forward: input " + x.shape_string() + " vs weight " +
                         weight_.value.shape_string());
  }
  Matrix y = matmul(x, weight_.value);
  const auto b = bias_.value.row(0);
  for (std::size_t r = 0; r < y.rows(); ++r) {
    auto row = y.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += b[c];
  }
  if (recording_) inputs_.push_back(x);
  return y;
}

Matrix Linear::backward(const Matrix& upstream) {
  if (inputs_.empty()) throw StateError("Linear::backward called without a cached forward");
  Matrix x = std::move(inputs_.back());
  inputs_.pop_back();
  if (upstream.rows() != x.rows() || upstream.cols() != out_features()) {
    throw DimensionError("Linear::backward: upstream " + upstream.shape_string() +
                         " does not match forward output");
  }
  matmul_tn_acc(x, upstream, weight_.grad);
  bias_.grad += column_sums(upstream);
  return matmul_nt(upstream, weight_.value);
}

// ---------------------------------------------------------------------------

GruCell::GruCell(std::string name, std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
  // Each gate block is initialized as its own fan_in × hidden matrix.
  Matrix wx(input_dim, 3 * hidden_dim);
  Matrix wh(hidden_dim, 3 * hidden_dim);
  for (std::size_t g = 0; g < 3; ++g) {
    add_column_block(wx, g * hidden_dim, glorot_uniform(input_dim, hidden_dim, rng));
    add_column_block(wh, g * hidden_dim, glorot_uniform(hidden_dim, hidden_dim, rng));
  }
  w_x_ = Parameter(name + ".w_x", std::move(wx));
  w_h_ = Parameter(name + ".w_h", std::move(wh));
  b_x_ = Parameter(name + ".b_x", Matrix(1, 3 * hidden_dim));
  b_h_ = Parameter(name + ".b_h", Matrix(1, 3 * hidden_dim));
}

Matrix GruCell::forward(const Matrix& x, const Matrix& h_prev) {
  const std::size_t d = hidden_dim();
  if (x.cols() != input_dim() || h_prev.cols() != d || x.rows() != h_prev.rows()) {
    throw DimensionError("GruCell::forward: x " + x.shape_string() + ", h " +
                         h_prev.shape_string() + " for input_dim " +
                         std::to_string(input_dim()) + ", hidden " + std::to_string(d));
  }
  const std::size_t rows = x.rows();
  Matrix gx = matmul(x, w_x_.value);
  Matrix gh = matmul(h_prev, w_h_.value);
  Matrix r(rows, d), z(rows, d), n(rows, d), hn(rows, d), h(rows, d);
  const auto bx = b_x_.value.row(0);
  const auto bh = b_h_.value.row(0);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto gxr = gx.row(i);
    const auto ghr = gh.row(i);
    const auto hp = h_prev.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double rv = 1.0 / (1.0 + std::exp(-(gxr[j] + bx[j] + ghr[j] + bh[j])));
      const double zv =
          1.0 / (1.0 + std::exp(-(gxr[d + j] + bx[d + j] + ghr[d + j] + bh[d + j])));
      const double hnv = ghr[2 * d + j] + bh[2 * d + j];
      const double nv = std::tanh(gxr[2 * d + j] + bx[2 * d + j] + rv * hnv);
      r(i, j) = rv;
      z(i, j) = zv;
      hn(i, j) = hnv;
      n(i, j) = nv;
      h(i, j) = (1.0 - zv) * nv + zv * hp[j];
    }
  }
  require_finite(h, "GruCell::forward");
  if (recording_) {
    cache_.push_back({x, h_prev, std::move(r), std::move(z), std::move(n), std::move(hn)});
  }
  return h;
}

GruCell::Grads GruCell::backward(const Matrix& dh) {
  if (cache_.empty()) throw StateError("GruCell::backward called without a cached forward");
  StepCache c = std::move(cache_.back());
  cache_.pop_back();
  const std::size_t d = hidden_dim();
  const std::size_t rows = c.x.rows();
  if (dh.rows() != rows || dh.cols() != d) {
    throw DimensionError("GruCell::backward: upstream " + dh.shape_string());
  }
  Matrix g_x(rows, 3 * d);  // pre-activation grads on the input path
  Matrix g_h(rows, 3 * d);  // pre-activation grads on the recurrent path
  Matrix dh_prev(rows, d);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double up = dh(i, j);
      const double rv = c.r(i, j), zv = c.z(i, j), nv = c.n(i, j), hnv = c.hn(i, j);
      const double hp = c.h_prev(i, j);
      const double dn_pre = up * (1.0 - zv) * (1.0 - nv * nv);
      const double dz_pre = up * (hp - nv) * zv * (1.0 - zv);
      const double dr_pre = dn_pre * hnv * rv * (1.0 - rv);
      dh_prev(i, j) = up * zv;
      g_x(i, j) = dr_pre;
      g_x(i, d + j) = dz_pre;
      g_x(i, 2 * d + j) = dn_pre;
      g_h(i, j) = dr_pre;
      g_h(i, d + j) = dz_pre;
      g_h(i, 2 * d + j) = dn_pre * rv;
    }
  }
  matmul_tn_acc(c.x, g_x, w_x_.grad);
  matmul_tn_acc(c.h_prev, g_h, w_h_.grad);
  b_x_.grad += column_sums(g_x);
  b_h_.grad += column_sums(g_h);
  dh_prev += matmul_nt(g_h, w_h_.value);
  return {matmul_nt(g_x, w_x_.value), std::move(dh_prev)};
}

}  // namespace mcg
