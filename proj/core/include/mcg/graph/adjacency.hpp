#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mcg/graph/topology.hpp"
#include "mcg/numerics/matrix.hpp"

namespace mcg {

// K typed interaction graphs over the same n agents. Layer k entry (i, j)
// non-zero means a type-k edge from agent j to agent i. After
// append_identity() layer 0 is the identity.
class AdjacencyTensor {
 public:
  AdjacencyTensor() = default;
  // Throws DimensionError for non-square or mismatched layers and
  // ArgumentError for negative or non-finite entries.
  explicit AdjacencyTensor(std::vector<Matrix> layers);

  static AdjacencyTensor from_topologies(std::span<const TopologyKind> kinds, std::size_t n);

  std::size_t n() const { return n_; }
  std::size_t k() const { return layers_.size(); }
  bool has_identity() const { return has_identity_; }
  const Matrix& layer(std::size_t i) const { return layers_.at(i); }
  const std::vector<Matrix>& layers() const { return layers_; }

  // Returns a copy with I prepended as layer 0. Throws StateError if the
  // identity was already appended.
  AdjacencyTensor append_identity() const;

 private:
  std::size_t n_ = 0;
  std::vector<Matrix> layers_;
  bool has_identity_ = false;
};

// Unordered agent pair with i < j.
struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  auto operator<=>(const Edge&) const = default;
};

using EdgeSet = std::vector<Edge>;

// {i, j}, i ≠ j, is an edge when any channel has max(A(i,j), A(j,i)) above
// the threshold. Lexicographically ordered.
EdgeSet extract_edges(std::span<const Matrix> channels, double threshold);

// All unordered pairs of n agents, lexicographic.
EdgeSet all_pairs(std::size_t n);

}  // namespace mcg
