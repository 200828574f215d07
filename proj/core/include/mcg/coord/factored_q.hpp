#pragma once

#include <cstddef>
#include <vector>

#include "mcg/graph/adjacency.hpp"
#include "mcg/numerics/matrix.hpp"

namespace mcg {

using JointAction = std::vector<std::size_t>;

// How per-agent utilities enter the joint value.
enum class Aggregation {
  kMean,  // (1/|V|) Σ Q_i + (1/(2|E|)) Σ_E [Q_ij + Q_ji]
  kSum,   // Σ Q_i (value decomposition), payoffs ignored
};

// Both orientations of one edge's payoff: forward(a_i, a_j) is Q_ij and
// backward(a_j, a_i) is Q_ji.
struct PayoffPair {
  Matrix forward;
  Matrix backward;
};

struct FactoredQ {
  std::vector<std::vector<double>> utilities;  // [agent][action]
  EdgeSet edges;
  std::vector<PayoffPair> payoffs;  // parallel to edges
  Aggregation aggregation = Aggregation::kMean;

  std::size_t agents() const { return utilities.size(); }
  std::size_t actions(std::size_t agent) const { return utilities[agent].size(); }

  // Throws DimensionError if tables and edges disagree.
  void validate() const;
};

// Joint value of `a`. Throws ArgumentError on a wrong-sized joint action or an
// out-of-range action index.
double evaluate_q(const FactoredQ& fq, const JointAction& a);

// Derivatives of evaluate_q w.r.t. each utility entry and payoff entry, scaled
// by `upstream`. Only the entries selected by `a` are non-zero.
struct FactoredQGrad {
  std::vector<std::vector<double>> utilities;
  std::vector<PayoffPair> payoffs;
};
FactoredQGrad evaluate_q_grad(const FactoredQ& fq, const JointAction& a, double upstream);
// Zero gradient with fq's shapes.
FactoredQGrad zero_grad_like(const FactoredQ& fq);
void accumulate(FactoredQGrad& into, const FactoredQ& fq, const JointAction& a, double upstream);

struct MaxSumResult {
  JointAction action;
  double value = 0.0;
  // Best value found so far after the initial candidate (index 0) and after
  // each message round.
  std::vector<double> best_per_round;
};

// Anytime max-sum over the edge set. Messages are exchanged synchronously
// and mean-normalized every round; after every round the local-argmax
// candidate is scored with evaluate_q and the best candidate is kept. Local
// argmax treats entries within a relative 1e-12 as tied and picks the lowest
// index.
MaxSumResult max_sum(const FactoredQ& fq, std::size_t iterations);
JointAction greedy_action(const FactoredQ& fq, std::size_t iterations);

// Independent per-agent argmax of the utilities, ties to the lowest index.
JointAction argmax_utilities(const FactoredQ& fq);

}  // namespace mcg
