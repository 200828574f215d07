#include "mcg/mcgnet/generator.hpp"

#include <string>

#include "mcg/errors.hpp"

namespace mcg {

McgGenerator::McgGenerator(MetaPathConfig cfg, std::size_t edge_types, std::size_t feature_dim,
                           Activation activation, bool bypass, Rng& rng)
    : cfg_(cfg), activation_(activation), bypass_(bypass) {
  cfg_.validate();
  sel_ = SelectionWeights(cfg_.length, cfg_.channels, edge_types, rng);
  gcn_weight_ = Parameter("mcg.gcn.weight", glorot_uniform(feature_dim, feature_dim, rng));
}

std::shared_ptr<McgGraph> McgGenerator::build_graph(const AdjacencyTensor& a) const {
  auto g = std::make_shared<McgGraph>();
  g->input = a;
  g->bypass = bypass_;
  if (bypass_) {
    if (a.k() >= 2) {
      g->edges = extract_edges(std::span<const Matrix>(&a.layer(1), 1), cfg_.edge_threshold);
    }
    return g;
  }
  if (!a.has_identity()) {
    throw StateError("McgGenerator: adjacency tensor must include the identity layer");
  }
  if (a.k() != sel_.edge_types()) {
    throw DimensionError("McgGenerator: tensor has " + std::to_string(a.k()) +
                         " edge types, generator expects " + std::to_string(sel_.edge_types()));
  }
  const std::size_t o = cfg_.channels;
  g->selected.resize(o);
  g->channels.reserve(o);
  g->normalized.reserve(o);
  for (std::size_t c = 0; c < o; ++c) {
    for (std::size_t s = 0; s < cfg_.length; ++s) g->selected[c].push_back(soft_select(a, sel_, s, c));
    g->channels.push_back(compose_metapath(g->selected[c]));
    g->normalized.push_back(normalize(g->channels.back()));
    g->d_normalized.emplace_back(a.n(), a.n());
  }
  g->edges = extract_edges(g->channels, cfg_.edge_threshold);
  return g;
}

Matrix McgGenerator::convolve(std::span<const std::shared_ptr<McgGraph>> graphs,
                              const Matrix& x) {
  if (graphs.empty()) throw ArgumentError("McgGenerator::convolve: no graphs");
  const std::size_t n = graphs.front()->input.n();
  const std::size_t d = feature_dim();
  if (x.rows() != graphs.size() * n || x.cols() != d) {
    throw DimensionError("McgGenerator::convolve: features " + x.shape_string() + " for " +
                         std::to_string(graphs.size()) + " graphs of " + std::to_string(n) +
                         " agents and feature dim " + std::to_string(d));
  }
  if (bypass_) {
    if (recording_) cache_.push_back({{graphs.begin(), graphs.end()}, {}, {}, {}});
    return x;
  }
  Matrix xw = matmul(x, gcn_weight_.value);
  const std::size_t o = cfg_.channels;
  std::vector<Matrix> outputs;
  outputs.reserve(o);
  for (std::size_t c = 0; c < o; ++c) {
    Matrix pre(x.rows(), d);
    for (std::size_t b = 0; b < graphs.size(); ++b) {
      const auto& graph = *graphs[b];
      if (graph.input.n() != n) throw DimensionError("McgGenerator::convolve: ragged graphs");
      add_row_block(pre, b * n, matmul(graph.normalized[c], row_block(xw, b * n, n)));
    }
    outputs.push_back(activate(activation_, pre));
  }
  Matrix z = hconcat(outputs);
  if (recording_) {
    cache_.push_back({{graphs.begin(), graphs.end()}, x, std::move(xw), std::move(outputs)});
  }
  return z;
}

Matrix McgGenerator::convolve_backward(const Matrix& dz) {
  if (cache_.empty()) throw StateError("McgGenerator: backward called without a cached forward");
  ConvCache c = std::move(cache_.back());
  cache_.pop_back();
  if (bypass_) return dz;
  const std::size_t d = feature_dim();
  const std::size_t o = cfg_.channels;
  const std::size_t n = c.graphs.front()->input.n();
  if (dz.rows() != c.x.rows() || dz.cols() != o * d) {
    throw DimensionError("McgGenerator::convolve_backward: upstream " + dz.shape_string());
  }
  Matrix dxw(c.x.rows(), d);
  for (std::size_t ch = 0; ch < o; ++ch) {
    const Matrix dpre = activate_backward(activation_, c.outputs[ch], column_block(dz, ch * d, d));
    for (std::size_t b = 0; b < c.graphs.size(); ++b) {
      auto& graph = *c.graphs[b];
      const Matrix dpre_b = row_block(dpre, b * n, n);
      graph.d_normalized[ch] += matmul_nt(dpre_b, row_block(c.xw, b * n, n));
      add_row_block(dxw, b * n, matmul_tn(graph.normalized[ch], dpre_b));
    }
  }
  matmul_tn_acc(c.x, dxw, gcn_weight_.grad);
  return matmul_nt(dxw, gcn_weight_.value);
}

void McgGenerator::graph_backward(McgGraph& graph) {
  if (graph.bypass) return;
  for (std::size_t ch = 0; ch < graph.channels.size(); ++ch) {
    if (max_abs(graph.d_normalized[ch]) == 0.0) continue;
    const Matrix d_channel = normalize_backward(graph.channels[ch], graph.d_normalized[ch]);
    const auto d_hops = compose_metapath_backward(graph.selected[ch], d_channel);
    for (std::size_t s = 0; s < d_hops.size(); ++s) {
      soft_select_backward(graph.input, sel_, s, ch, d_hops[s]);
    }
    graph.d_normalized[ch].set_zero();
  }
}

McgOutput McgGenerator::generate(const AdjacencyTensor& a, const Matrix& x) {
  if (a.n() != x.rows()) {
    throw DimensionError("McgGenerator::generate: " + std::to_string(a.n()) +
                         " agents but features " + x.shape_string());
  }
  auto graph = build_graph(a);
  const std::shared_ptr<McgGraph> graphs[] = {graph};
  McgOutput out;
  out.z = convolve(graphs, x);
  out.channels = graph->channels;
  out.edges = graph->edges;
  if (recording_) pending_.push_back(std::move(graph));
  return out;
}

Matrix McgGenerator::generate_backward(const Matrix& dz) {
  if (pending_.empty()) throw StateError("McgGenerator: backward called without a cached forward");
  auto graph = std::move(pending_.back());
  pending_.pop_back();
  Matrix dx = convolve_backward(dz);
  graph_backward(*graph);
  return dx;
}

}  // namespace mcg
