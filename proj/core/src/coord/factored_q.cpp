#include "mcg/coord/factored_q.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

// Relative gap below which two entries count as tied. Loopy max-sum drives
// some beliefs to values equal up to rounding, and without a tolerance the
// winner would be decided by the last bit.
constexpr double kTieTolerance = 1e-12;

std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double scale = std::max({1.0, std::abs(v[i]), std::abs(v[best])});
    if (v[i] > v[best] + kTieTolerance * scale) best = i;
  }
  return best;
}

void check_action(const FactoredQ& fq, const JointAction& a) {
  if (a.size() != fq.agents()) {
    throw ArgumentError("joint action has " + std::to_string(a.size()) + " entries for " +
                        std::to_string(fq.agents()) + " agents");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= fq.actions(i)) {
      throw ArgumentError("action " + std::to_string(a[i]) + " out of range for agent " +
                          std::to_string(i));
    }
  }
}

bool uses_payoffs(const FactoredQ& fq) {
  return fq.aggregation == Aggregation::kMean && !fq.edges.empty();
}

}  // namespace

void FactoredQ::validate() const {
  if (aggregation == Aggregation::kSum) return;
  if (payoffs.size() != edges.size()) {
    throw DimensionError("FactoredQ: " + std::to_string(edges.size()) + " edges but " +
                         std::to_string(payoffs.size()) + " payoff pairs");
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    if (i >= agents() || j >= agents() || i == j) throw DimensionError("FactoredQ: bad edge");
    const auto& p = payoffs[e];
    if (p.forward.rows() != actions(i) || p.forward.cols() != actions(j) ||
        p.backward.rows() != actions(j) || p.backward.cols() != actions(i)) {
      throw DimensionError("FactoredQ: payoff table shape mismatch on edge " +
                           std::to_string(i) + "-" + std::to_string(j));
    }
  }
}

double evaluate_q(const FactoredQ& fq, const JointAction& a) {
  check_action(fq, a);
  double utility = 0.0;
  for (std::size_t i = 0; i < fq.agents(); ++i) utility += fq.utilities[i][a[i]];
  if (fq.aggregation == Aggregation::kSum) return utility;
  double value = utility / static_cast<double>(fq.agents());
  if (fq.edges.empty()) return value;
  double payoff = 0.0;
  for (std::size_t e = 0; e < fq.edges.size(); ++e) {
    const auto [i, j] = fq.edges[e];
    payoff += fq.payoffs[e].forward(a[i], a[j]) + fq.payoffs[e].backward(a[j], a[i]);
  }
  return value + payoff / (2.0 * static_cast<double>(fq.edges.size()));
}

FactoredQGrad zero_grad_like(const FactoredQ& fq) {
  FactoredQGrad g;
  g.utilities.reserve(fq.agents());
  for (const auto& u : fq.utilities) g.utilities.emplace_back(u.size(), 0.0);
  if (uses_payoffs(fq)) {
    g.payoffs.reserve(fq.payoffs.size());
    for (const auto& p : fq.payoffs) {
      g.payoffs.push_back({Matrix(p.forward.rows(), p.forward.cols()),
                           Matrix(p.backward.rows(), p.backward.cols())});
    }
  }
  return g;
}

void accumulate(FactoredQGrad& into, const FactoredQ& fq, const JointAction& a,
                double upstream) {
  check_action(fq, a);
  const double u_scale = fq.aggregation == Aggregation::kSum
                             ? upstream
                             : upstream / static_cast<double>(fq.agents());
  for (std::size_t i = 0; i < fq.agents(); ++i) into.utilities[i][a[i]] += u_scale;
  if (!uses_payoffs(fq)) return;
  const double p_scale = upstream / (2.0 * static_cast<double>(fq.edges.size()));
  for (std::size_t e = 0; e < fq.edges.size(); ++e) {
    const auto [i, j] = fq.edges[e];
    into.payoffs[e].forward(a[i], a[j]) += p_scale;
    into.payoffs[e].backward(a[j], a[i]) += p_scale;
  }
}

FactoredQGrad evaluate_q_grad(const FactoredQ& fq, const JointAction& a, double upstream) {
  FactoredQGrad g = zero_grad_like(fq);
  accumulate(g, fq, a, upstream);
  return g;
}

JointAction argmax_utilities(const FactoredQ& fq) {
  JointAction a(fq.agents());
  for (std::size_t i = 0; i < fq.agents(); ++i) a[i] = argmax(fq.utilities[i]);
  return a;
}

MaxSumResult max_sum(const FactoredQ& fq, std::size_t iterations) {
  if (iterations < 1) throw ArgumentError("max_sum: iterations must be at least 1");
  fq.validate();
  MaxSumResult result;
  result.action = argmax_utilities(fq);
  result.value = evaluate_q(fq, result.action);
  result.best_per_round.push_back(result.value);
  if (!uses_payoffs(fq)) return result;

  const std::size_t n = fq.agents();
  const std::size_t m = fq.edges.size();
  const double u_scale = 1.0 / static_cast<double>(n);
  const double p_scale = 1.0 / (2.0 * static_cast<double>(m));

  // Edge factor f_e(a_i, a_j) in the orientation of the stored edge {i, j}.
  std::vector<Matrix> factor;
  factor.reserve(m);
  for (std::size_t e = 0; e < m; ++e) {
    const auto& p = fq.payoffs[e];
    Matrix f(p.forward.rows(), p.forward.cols());
    for (std::size_t x = 0; x < f.rows(); ++x)
      for (std::size_t y = 0; y < f.cols(); ++y)
        f(x, y) = p_scale * (p.forward(x, y) + p.backward(y, x));
    factor.push_back(std::move(f));
  }

  // msg[2e] flows i→j (a function of a_j), msg[2e+1] flows j→i.
  std::vector<std::vector<double>> msg(2 * m);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t e = 0; e < m; ++e) {
    const auto [i, j] = fq.edges[e];
    msg[2 * e].assign(fq.actions(j), 0.0);
    msg[2 * e + 1].assign(fq.actions(i), 0.0);
    incident[i].push_back(e);
    incident[j].push_back(e);
  }
  auto inbound = [&](std::size_t agent) {
    std::vector<double> belief(fq.utilities[agent]);
    for (auto& v : belief) v *= u_scale;
    for (std::size_t e : incident[agent]) {
      const auto& in = fq.edges[e].j == agent ? msg[2 * e] : msg[2 * e + 1];
      for (std::size_t x = 0; x < belief.size(); ++x) belief[x] += in[x];
    }
    return belief;
  };

  std::vector<std::vector<double>> next(msg.size());
  for (std::size_t round = 0; round < iterations; ++round) {
    std::vector<std::vector<double>> beliefs(n);
    for (std::size_t i = 0; i < n; ++i) beliefs[i] = inbound(i);
    for (std::size_t e = 0; e < m; ++e) {
      const auto [i, j] = fq.edges[e];
      const Matrix& f = factor[e];
      // i → j: max over a_i of belief_i minus j's own contribution.
      {
        const auto& back = msg[2 * e + 1];
        auto& out = next[2 * e];
        out.assign(fq.actions(j), 0.0);
        for (std::size_t y = 0; y < fq.actions(j); ++y) {
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t x = 0; x < fq.actions(i); ++x) {
            best = std::max(best, beliefs[i][x] - back[x] + f(x, y));
          }
          out[y] = best;
        }
      }
      // j → i
      {
        const auto& back = msg[2 * e];
        auto& out = next[2 * e + 1];
        out.assign(fq.actions(i), 0.0);
        for (std::size_t x = 0; x < fq.actions(i); ++x) {
          double best = -std::numeric_limits<double>::infinity();
          for (std::size_t y = 0; y < fq.actions(j); ++y) {
            best = std::max(best, beliefs[j][y] - back[y] + f(x, y));
          }
          out[x] = best;
        }
      }
    }
    for (auto& v : next) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      for (auto& x : v) x -= mean;
    }
    std::swap(msg, next);

    JointAction candidate(n);
    for (std::size_t i = 0; i < n; ++i) candidate[i] = argmax(inbound(i));
    const double value = evaluate_q(fq, candidate);
    if (value > result.value) {
      result.value = value;
      result.action = std::move(candidate);
    }
    result.best_per_round.push_back(result.value);
  }
  return result;
}

JointAction greedy_action(const FactoredQ& fq, std::size_t iterations) {
  return max_sum(fq, iterations).action;
}

}  // namespace mcg
