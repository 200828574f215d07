#include "mcg/graph/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcg/errors.hpp"

namespace mcg {

AdjacencyTensor::AdjacencyTensor(std::vector<Matrix> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw ArgumentError("AdjacencyTensor: at least one layer required");
  n_ = layers_.front().rows();
  for (const auto& l : layers_) {
    if (l.rows() != n_ || l.cols() != n_) {
      throw DimensionError("AdjacencyTensor: layer " + l.shape_string() + " is not " +
                           std::to_string(n_) + "x" + std::to_string(n_));
    }
    for (double v : l.data()) {
      if (!std::isfinite(v) || v < 0.0) {
        throw ArgumentError("AdjacencyTensor: entries must be finite and nonnegative");
      }
    }
  }
}

AdjacencyTensor AdjacencyTensor::from_topologies(std::span<const TopologyKind> kinds,
                                                 std::size_t n) {
  std::vector<Matrix> layers;
  layers.reserve(kinds.size());
  for (auto kind : kinds) layers.push_back(make_topology(kind, n));
  return AdjacencyTensor(std::move(layers));
}

AdjacencyTensor AdjacencyTensor::append_identity() const {
  if (has_identity_) throw StateError("append_identity: identity layer already appended");
  std::vector<Matrix> layers;
  layers.reserve(layers_.size() + 1);
  layers.push_back(Matrix::identity(n_));
  layers.insert(layers.end(), layers_.begin(), layers_.end());
  AdjacencyTensor out(std::move(layers));
  out.has_identity_ = true;
  return out;
}

EdgeSet extract_edges(std::span<const Matrix> channels, double threshold) {
  EdgeSet edges;
  if (channels.empty()) return edges;
  const std::size_t n = channels.front().rows();
  for (const auto& c : channels) {
    if (c.rows() != n || c.cols() != n) {
      throw DimensionError("extract_edges: channel " + c.shape_string() + " is not square " +
                           std::to_string(n));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool linked = std::any_of(channels.begin(), channels.end(), [&](const Matrix& c) {
        return std::max(c(i, j), c(j, i)) > threshold;
      });
      if (linked) edges.push_back({i, j});
    }
  }
  return edges;
}

EdgeSet all_pairs(std::size_t n) {
  EdgeSet edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  return edges;
}

}  // namespace mcg
