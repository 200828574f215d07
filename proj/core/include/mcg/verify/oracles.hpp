#pragma once

#include <cstdint>
#include <vector>

#include "mcg/coord/factored_q.hpp"
#include "mcg/graph/adjacency.hpp"
#include "mcg/numerics/matrix.hpp"
#include "mcg/numerics/parameter.hpp"

// Slow, deliberately independent reference implementations used to check the
// production code paths.
namespace mcg::oracle {

// Textbook i-j-k triple loop.
Matrix naive_matmul(const Matrix& a, const Matrix& b);

// reach(i, j) is true when a walk j = v_0 → v_1 → … → v_l = i exists whose
// hop s uses an edge of type types[s - 1], i.e. layers[types[s-1]](v_s,
// v_{s-1}) ≠ 0. Enumerates every intermediate node sequence.
std::vector<std::vector<bool>> typed_path_reachability(const std::vector<Matrix>& layers,
                                                       const std::vector<std::size_t>& types);

// Maximum of evaluate_q over every joint action, with the maximizing action
// (first in lexicographic order on ties).
struct ExhaustiveMax {
  JointAction action;
  double value = 0.0;
};
ExhaustiveMax exhaustive_max(const FactoredQ& fq);

// Joint value recomputed from the definition with its own loops: utilities
// summed per agent, payoffs summed per edge over both orientations, then
// weighted.
double resum_q(const FactoredQ& fq, const JointAction& a);

// Unordered pairs {i, j} with some channel entry above threshold, by a plain
// scan over all (i, j).
EdgeSet scan_edges(const std::vector<Matrix>& channels, double threshold);

// Random FactoredQ generators. Utilities and payoffs are uniform in [-1, 1].
FactoredQ random_factored_q(std::size_t n, std::size_t actions, const EdgeSet& edges,
                            Aggregation aggregation, Rng& rng);
// Random spanning tree: each node v > 0 attaches to a uniform node < v, then
// labels are shuffled.
EdgeSet random_tree(std::size_t n, Rng& rng);
// Random connected graph containing at least one cycle (n ≥ 3).
EdgeSet random_cyclic(std::size_t n, Rng& rng);

}  // namespace mcg::oracle
