#include "mcg/verify/oracles.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mcg/errors.hpp"

namespace mcg::oracle {

Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("naive_matmul: inner dimensions differ");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      out(i, j) = acc;
    }
  }
  return out;
}

std::vector<std::vector<bool>> typed_path_reachability(const std::vector<Matrix>& layers,
                                                       const std::vector<std::size_t>& types) {
  const std::size_t n = layers.at(0).rows();
  const std::size_t l = types.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  // walk[0] = j, walk[l] = i; enumerate walk[0..l] as a base-n counter.
  std::vector<std::size_t> walk(l + 1, 0);
  while (true) {
    bool ok = true;
    for (std::size_t s = 1; s <= l && ok; ++s) {
      ok = layers[types[s - 1]](walk[s], walk[s - 1]) != 0.0;
    }
    if (ok) reach[walk[l]][walk[0]] = true;
    std::size_t pos = 0;
    while (pos <= l && ++walk[pos] == n) walk[pos++] = 0;
    if (pos > l) break;
  }
  return reach;
}

ExhaustiveMax exhaustive_max(const FactoredQ& fq) {
  const std::size_t n = fq.agents();
  JointAction a(n, 0);
  ExhaustiveMax best;
  bool first = true;
  while (true) {
    const double v = evaluate_q(fq, a);
    if (first || v > best.value) {
      best.value = v;
      best.action = a;
      first = false;
    }
    // Little-endian counter with agent n-1 as the fastest digit keeps the
    // iteration lexicographic.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++a[pos] < fq.actions(pos)) break;
      a[pos] = 0;
      if (pos == 0) return best;
    }
    if (n == 0) return best;
  }
}

double resum_q(const FactoredQ& fq, const JointAction& a) {
  double util = 0.0;
  for (std::size_t i = 0; i < fq.utilities.size(); ++i) util += fq.utilities[i].at(a.at(i));
  double pay = 0.0;
  for (std::size_t e = 0; e < fq.edges.size(); ++e) {
    const auto [i, j] = fq.edges[e];
    pay += fq.payoffs[e].forward(a[i], a[j]);
    pay += fq.payoffs[e].backward(a[j], a[i]);
  }
  if (fq.aggregation == Aggregation::kSum) return util;
  double out = util / static_cast<double>(fq.utilities.size());
  if (!fq.edges.empty()) out += pay / (2.0 * static_cast<double>(fq.edges.size()));
  return out;
}

EdgeSet scan_edges(const std::vector<Matrix>& channels, double threshold) {
  std::set<std::pair<std::size_t, std::size_t>> found;
  for (const auto& c : channels) {
    for (std::size_t r = 0; r < c.rows(); ++r) {
      for (std::size_t s = 0; s < c.cols(); ++s) {
        if (r != s && c(r, s) > threshold) found.insert({std::min(r, s), std::max(r, s)});
      }
    }
  }
  EdgeSet out;
  for (const auto& [i, j] : found) out.push_back({i, j});
  return out;
}

FactoredQ random_factored_q(std::size_t n, std::size_t actions, const EdgeSet& edges,
                            Aggregation aggregation, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FactoredQ fq;
  fq.aggregation = aggregation;
  fq.utilities.assign(n, std::vector<double>(actions));
  for (auto& row : fq.utilities) {
    for (auto& v : row) v = u(rng);
  }
  fq.edges = edges;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    PayoffPair p{Matrix(actions, actions), Matrix(actions, actions)};
    for (auto& v : p.forward.data()) v = u(rng);
    for (auto& v : p.backward.data()) v = u(rng);
    fq.payoffs.push_back(std::move(p));
  }
  return fq;
}

namespace {

std::vector<std::size_t> shuffled_labels(std::size_t n, Rng& rng) {
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(label[i - 1], label[pick(rng)]);
  }
  return label;
}

EdgeSet normalized(std::set<std::pair<std::size_t, std::size_t>> pairs) {
  EdgeSet out;
  for (const auto& [i, j] : pairs) out.push_back({i, j});
  return out;
}

}  // namespace

EdgeSet random_tree(std::size_t n, Rng& rng) {
  const auto label = shuffled_labels(n, rng);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t v = 1; v < n; ++v) {
    std::uniform_int_distribution<std::size_t> parent(0, v - 1);
    const std::size_t a = label[v], b = label[parent(rng)];
    pairs.insert({std::min(a, b), std::max(a, b)});
  }
  return normalized(pairs);
}

EdgeSet random_cyclic(std::size_t n, Rng& rng) {
  if (n < 3) throw ArgumentError("random_cyclic needs at least 3 nodes");
  EdgeSet tree = random_tree(n, rng);
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : tree) pairs.insert({e.i, e.j});
  std::vector<std::pair<std::size_t, std::size_t>> missing;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!pairs.count({i, j})) missing.push_back({i, j});
    }
  }
  // At least one extra edge closes a cycle; add a random number more.
  std::uniform_int_distribution<std::size_t> extra(1, missing.size());
  const std::size_t add = extra(rng);
  for (std::size_t k = 0; k < add; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, missing.size() - 1);
    std::swap(missing[k], missing[pick(rng)]);
    pairs.insert(missing[k]);
  }
  return normalized(pairs);
}

}  // namespace mcg::oracle
