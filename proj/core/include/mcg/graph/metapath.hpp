#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mcg/graph/adjacency.hpp"
#include "mcg/numerics/parameter.hpp"

namespace mcg {

struct MetaPathConfig {
  std::size_t length = 2;    // hops composed per channel
  std::size_t channels = 2;  // output meta-graphs
  double edge_threshold = 1e-6;

  void validate() const;
};

// 1×1-convolution weights over edge types, one independent row per
// (slot, channel). Row index is slot * channels + channel.
class SelectionWeights {
 public:
  SelectionWeights() = default;
  SelectionWeights(std::size_t length, std::size_t channels, std::size_t edge_types, Rng& rng);

  std::size_t length() const { return length_; }
  std::size_t channels() const { return channels_; }
  std::size_t edge_types() const { return w_phi_.value.cols(); }
  std::size_t row_index(std::size_t slot, std::size_t channel) const;

  // softmax of the (slot, channel) row, recomputed on every call.
  std::vector<double> alpha(std::size_t slot, std::size_t channel) const;

  Parameter& w_phi() { return w_phi_; }
  const Parameter& w_phi() const { return w_phi_; }

 private:
  std::size_t length_ = 0;
  std::size_t channels_ = 0;
  Parameter w_phi_;
};

// Σ_k α_k A_k with α = softmax(w_phi[slot, channel]).
Matrix soft_select(const AdjacencyTensor& a, const SelectionWeights& sel, std::size_t slot,
                   std::size_t channel);
// Accumulates ∂loss/∂w_phi[slot, channel] given ∂loss/∂(soft_select output).
void soft_select_backward(const AdjacencyTensor& a, SelectionWeights& sel, std::size_t slot,
                          std::size_t channel, const Matrix& upstream);

// S_l ⋯ S_2 S_1 for selected = [S_1, …, S_l]; the first hop is applied first
// (rightmost).
Matrix compose_metapath(std::span<const Matrix> selected);
// ∂loss/∂S_i for every slot via the product rule.
std::vector<Matrix> compose_metapath_backward(std::span<const Matrix> selected,
                                              const Matrix& upstream);

// D̃⁻¹(A + I), D̃ the diagonal of row sums of A + I. Throws ArgumentError on
// negative entries.
Matrix normalize(const Matrix& a_m);
// ∂loss/∂A given ∂loss/∂normalize(A).
Matrix normalize_backward(const Matrix& a_m, const Matrix& upstream);

}  // namespace mcg
