#include "mcg/graph/metapath.hpp"

#include <string>

#include "mcg/errors.hpp"

namespace mcg {

void MetaPathConfig::validate() const {
  if (length < 1) throw ArgumentError("meta-path length must be at least 1");
  if (channels < 1) throw ArgumentError("meta-path channel count must be at least 1");
  if (!(edge_threshold >= 0.0)) throw ArgumentError("edge threshold must be nonnegative");
}

SelectionWeights::SelectionWeights(std::size_t length, std::size_t channels,
                                   std::size_t edge_types, Rng& rng)
    : length_(length), channels_(channels) {
  if (length == 0 || channels == 0 || edge_types == 0) {
    throw ArgumentError("SelectionWeights: length, channels and edge types must be positive");
  }
  // Small symmetric init keeps the initial selection close to uniform.
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  Matrix w(length * channels, edge_types);
  for (auto& v : w.data()) v = dist(rng);
  w_phi_ = Parameter("mcg.w_phi", std::move(w));
}

std::size_t SelectionWeights::row_index(std::size_t slot, std::size_t channel) const {
  if (slot >= length_ || channel >= channels_) {
    throw ArgumentError("selection index (slot " + std::to_string(slot) + ", channel " +
                        std::to_string(channel) + ") out of range for " +
                        std::to_string(length_) + " slots x " + std::to_string(channels_) +
                        " channels");
  }
  return slot * channels_ + channel;
}

std::vector<double> SelectionWeights::alpha(std::size_t slot, std::size_t channel) const {
  return softmax(w_phi_.value.row(row_index(slot, channel)));
}

Matrix soft_select(const AdjacencyTensor& a, const SelectionWeights& sel, std::size_t slot,
                   std::size_t channel) {
  if (a.k() != sel.edge_types()) {
    throw DimensionError("soft_select: tensor has " + std::to_string(a.k()) +
                         " layers, selection expects " + std::to_string(sel.edge_types()));
  }
  const auto alpha = sel.alpha(slot, channel);
  Matrix out(a.n(), a.n());
  auto od = out.data();
  for (std::size_t k = 0; k < a.k(); ++k) {
    const auto ld = a.layer(k).data();
    for (std::size_t i = 0; i < od.size(); ++i) od[i] += alpha[k] * ld[i];
  }
  return out;
}

void soft_select_backward(const AdjacencyTensor& a, SelectionWeights& sel, std::size_t slot,
                          std::size_t channel, const Matrix& upstream) {
  if (!upstream.same_shape(Matrix(a.n(), a.n()))) {
    throw DimensionError("soft_select_backward: upstream " + upstream.shape_string());
  }
  const auto alpha = sel.alpha(slot, channel);
  std::vector<double> d_alpha(a.k(), 0.0);
  const auto ud = upstream.data();
  for (std::size_t k = 0; k < a.k(); ++k) {
    const auto ld = a.layer(k).data();
    double acc = 0.0;
    for (std::size_t i = 0; i < ud.size(); ++i) acc += ud[i] * ld[i];
    d_alpha[k] = acc;
  }
  double weighted = 0.0;
  for (std::size_t k = 0; k < a.k(); ++k) weighted += alpha[k] * d_alpha[k];
  auto grow = sel.w_phi().grad.row(sel.row_index(slot, channel));
  for (std::size_t k = 0; k < a.k(); ++k) grow[k] += alpha[k] * (d_alpha[k] - weighted);
}

Matrix compose_metapath(std::span<const Matrix> selected) {
  if (selected.empty()) throw ArgumentError("compose_metapath: empty meta-path");
  Matrix out = selected.front();
  if (out.rows() != out.cols()) {
    throw DimensionError("compose_metapath: non-square hop " + out.shape_string());
  }
  for (std::size_t i = 1; i < selected.size(); ++i) {
    if (!selected[i].same_shape(out)) {
      throw DimensionError("compose_metapath: hop " + std::to_string(i) + " is " +
                           selected[i].shape_string() + ", expected " + out.shape_string());
    }
    out = matmul(selected[i], out);
  }
  return out;
}

std::vector<Matrix> compose_metapath_backward(std::span<const Matrix> selected,
                                              const Matrix& upstream) {
  const std::size_t l = selected.size();
  if (l == 0) throw ArgumentError("compose_metapath_backward: empty meta-path");
  const std::size_t n = selected.front().rows();
  // prefix[i] = S_i ⋯ S_1 (prefix[0] = I), suffix[i] = S_l ⋯ S_{i+1}.
  std::vector<Matrix> prefix(l);
  prefix[0] = Matrix::identity(n);
  for (std::size_t i = 1; i < l; ++i) prefix[i] = matmul(selected[i - 1], prefix[i - 1]);
  std::vector<Matrix> suffix(l);
  suffix[l - 1] = Matrix::identity(n);
  for (std::size_t i = l - 1; i-- > 0;) suffix[i] = matmul(suffix[i + 1], selected[i + 1]);
  std::vector<Matrix> grads;
  grads.reserve(l);
  for (std::size_t i = 0; i < l; ++i) {
    grads.push_back(matmul_nt(matmul_tn(suffix[i], upstream), prefix[i]));
  }
  return grads;
}

Matrix normalize(const Matrix& a_m) {
  if (a_m.rows() != a_m.cols()) {
    throw DimensionError("normalize: non-square " + a_m.shape_string());
  }
  const std::size_t n = a_m.rows();
  Matrix out = a_m;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = out.row(i);
    row[i] += 1.0;
    double degree = 0.0;
    for (double v : row) {
      if (v < 0.0) throw ArgumentError("normalize: negative adjacency entry");
      degree += v;
    }
    for (auto& v : row) v /= degree;
  }
  return out;
}

Matrix normalize_backward(const Matrix& a_m, const Matrix& upstream) {
  if (!a_m.same_shape(upstream) || a_m.rows() != a_m.cols()) {
    throw DimensionError("normalize_backward: " + a_m.shape_string() + " vs " +
                         upstream.shape_string());
  }
  const std::size_t n = a_m.rows();
  Matrix grad(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = a_m.row(i);
    const auto u = upstream.row(i);
    double degree = 1.0;
    for (double v : a) degree += v;
    // N_ij = Ã_ij / d_i; only row i depends on row i of A.
    double dot = 0.0;
    for (std::size_t j = 0; j < n; ++j) dot += u[j] * (a[j] + (i == j ? 1.0 : 0.0));
    const double shared = dot / (degree * degree);
    auto g = grad.row(i);
    for (std::size_t j = 0; j < n; ++j) g[j] = u[j] / degree - shared;
  }
  return grad;
}

}  // namespace mcg
