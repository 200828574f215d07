#include "mcg/coord/network.hpp"

#include <string>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

// Independent RNG stream per component so that algorithms sharing a component
// also share its initialization.
Rng component_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

enum Stream : std::uint64_t { kEncoderStream = 1, kHeadStream = 2, kGeneratorStream = 3 };

}  // namespace

Algo parse_algo(std::string_view name) {
  if (name == "iql") return Algo::kIql;
  if (name == "vdn") return Algo::kVdn;
  if (name == "dcg") return Algo::kDcg;
  if (name == "dmcg") return Algo::kDmcg;
  if (name == "dmcg_vdn") return Algo::kDmcgVdn;
  throw ArgumentError("unknown algo '" + std::string(name) + "'");
}

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::kIql: return "iql";
    case Algo::kVdn: return "vdn";
    case Algo::kDcg: return "dcg";
    case Algo::kDmcg: return "dmcg";
    case Algo::kDmcgVdn: return "dmcg_vdn";
  }
  return "?";
}

bool uses_generator(Algo algo) { return algo == Algo::kDmcg || algo == Algo::kDmcgVdn; }
bool uses_payoffs(Algo algo) { return algo == Algo::kDcg || algo == Algo::kDmcg; }

void NetConfig::validate() const {
  if (n_agents == 0 || n_actions == 0 || obs_dim == 0) {
    throw ConfigError("network: agent, action and observation counts must be positive");
  }
  if (hidden_dim == 0 || embed_dim == 0 || payoff_hidden == 0) {
    throw ConfigError("network: layer widths must be positive");
  }
  if (msgpass_iterations == 0) throw ConfigError("msgpass.iterations must be at least 1");
  if (uses_generator(algo)) {
    mcg.validate();
    if (dynamic_layers == 0 && topologies.empty()) {
      throw ConfigError("mcg.topologies must name at least one topology");
    }
  }
}

CoordinationNet::CoordinationNet(NetConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
  cfg_.validate();
  Rng enc_rng = component_rng(seed, kEncoderStream);
  Rng head_rng = component_rng(seed, kHeadStream);
  Rng gen_rng = component_rng(seed, kGeneratorStream);

  encoder_ = AgentEncoder({cfg_.n_agents, cfg_.n_actions, cfg_.obs_dim, cfg_.embed_dim,
                           cfg_.hidden_dim},
                          enc_rng);
  if (uses_generator(cfg_.algo)) {
    const std::size_t k = 1 + (cfg_.dynamic_layers > 0 ? cfg_.dynamic_layers : cfg_.topologies.size());
    generator_.emplace(cfg_.mcg, k, cfg_.hidden_dim, cfg_.activation, cfg_.bypass, gen_rng);
    if (cfg_.dynamic_layers == 0) {
      static_tensor_ =
          AdjacencyTensor::from_topologies(cfg_.topologies, cfg_.n_agents).append_identity();
    }
  }
  const std::size_t d = feature_dim();
  utility_ = UtilityHead(d, cfg_.n_actions, head_rng);
  if (uses_payoffs(cfg_.algo)) {
    payoff_.emplace(d, cfg_.payoff_hidden, cfg_.n_actions, head_rng);
  }
  if (cfg_.algo == Algo::kDcg) {
    const Matrix topo = make_topology(cfg_.dcg_topology, cfg_.n_agents);
    dcg_edges_ = extract_edges(std::span<const Matrix>(&topo, 1), cfg_.mcg.edge_threshold);
  }
}

std::size_t CoordinationNet::feature_dim() const {
  return generator_ ? generator_->output_dim() : cfg_.hidden_dim;
}

void CoordinationNet::begin_episode(std::size_t batch) {
  batch_ = batch;
  encoder_.begin_episode(batch);
  if (generator_ && cfg_.dynamic_layers == 0) static_graph_ = generator_->build_graph(static_tensor_);
}

Matrix CoordinationNet::features(const Matrix& x, std::span<const AdjacencyTensor> dynamic_graphs,
                                 StepMeta& meta) {
  meta.edges.resize(batch_);
  if (!generator_) {
    for (auto& e : meta.edges) e = dcg_edges_;
    return x;
  }
  std::vector<std::shared_ptr<McgGraph>> graphs;
  graphs.reserve(batch_);
  if (cfg_.dynamic_layers > 0) {
    if (dynamic_graphs.size() != batch_) {
      throw ArgumentError("CoordinationNet: expected " + std::to_string(batch_) +
                          " per-episode graphs, got " + std::to_string(dynamic_graphs.size()));
    }
    for (const auto& t : dynamic_graphs) {
      if (t.k() != cfg_.dynamic_layers) {
        throw DimensionError("CoordinationNet: environment graph has " + std::to_string(t.k()) +
                             " layers, expected " + std::to_string(cfg_.dynamic_layers));
      }
      graphs.push_back(generator_->build_graph(t.append_identity()));
    }
    meta.dynamic = graphs;
  } else {
    graphs.assign(batch_, static_graph_);
  }
  for (std::size_t b = 0; b < batch_; ++b) meta.edges[b] = graphs[b]->edges;
  return generator_->convolve(graphs, x);
}

std::vector<FactoredQ> CoordinationNet::heads(const Matrix& f, const StepMeta& meta) {
  const std::size_t n = cfg_.n_agents;
  const std::size_t a = cfg_.n_actions;
  const Matrix u = utility_.forward(f);

  Matrix payoff_out;
  if (payoff_) {
    std::vector<NodePair> pairs;
    for (std::size_t b = 0; b < batch_; ++b) {
      for (const auto& edge : meta.edges[b]) {
        pairs.emplace_back(b * n + edge.i, b * n + edge.j);
        pairs.emplace_back(b * n + edge.j, b * n + edge.i);
      }
    }
    if (!pairs.empty()) payoff_out = payoff_->forward(f, pairs);
  }

  std::vector<FactoredQ> out(batch_);
  std::size_t r = 0;
  for (std::size_t b = 0; b < batch_; ++b) {
    FactoredQ& fq = out[b];
    fq.aggregation = uses_payoffs(cfg_.algo) ? Aggregation::kMean : Aggregation::kSum;
    fq.utilities.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = u.row(b * n + i);
      fq.utilities[i].assign(row.begin(), row.end());
    }
    if (!payoff_) continue;
    fq.edges = meta.edges[b];
    fq.payoffs.reserve(fq.edges.size());
    for (std::size_t e = 0; e < fq.edges.size(); ++e) {
      const auto fwd = payoff_out.row(r++);
      const auto bwd = payoff_out.row(r++);
      fq.payoffs.push_back({Matrix(a, a, std::vector<double>(fwd.begin(), fwd.end())),
                            Matrix(a, a, std::vector<double>(bwd.begin(), bwd.end()))});
    }
  }
  return out;
}

std::vector<FactoredQ> CoordinationNet::step(const Matrix& obs,
                                             std::span<const std::size_t> prev_actions,
                                             std::span<const AdjacencyTensor> dynamic_graphs) {
  if (batch_ == 0) throw StateError("CoordinationNet::step before begin_episode");
  const Matrix x = encoder_.encode_step(obs, prev_actions);
  StepMeta meta;
  const Matrix f = features(x, dynamic_graphs, meta);
  auto out = heads(f, meta);
  if (recording_) {
    meta.payoff_forward = false;
    for (const auto& e : meta.edges) meta.payoff_forward |= payoff_.has_value() && !e.empty();
    meta_.push_back(std::move(meta));
  }
  return out;
}

void CoordinationNet::backward_step(std::span<const FactoredQGrad> grads) {
  if (meta_.empty()) throw StateError("CoordinationNet::backward_step without a cached step");
  StepMeta meta = std::move(meta_.back());
  meta_.pop_back();
  if (grads.size() != batch_) {
    throw ArgumentError("CoordinationNet::backward_step: expected " + std::to_string(batch_) +
                        " gradients, got " + std::to_string(grads.size()));
  }
  const std::size_t n = cfg_.n_agents;
  const std::size_t a = cfg_.n_actions;
  Matrix du(batch_ * n, a);
  for (std::size_t b = 0; b < batch_; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& g = grads[b].utilities.at(i);
      std::copy(g.begin(), g.end(), du.row(b * n + i).begin());
    }
  }
  Matrix df = utility_.backward(du);
  if (meta.payoff_forward) {
    std::size_t rows = 0;
    for (const auto& e : meta.edges) rows += 2 * e.size();
    Matrix dout(rows, a * a);
    std::size_t r = 0;
    for (std::size_t b = 0; b < batch_; ++b) {
      const auto& pg = grads[b].payoffs;
      for (std::size_t e = 0; e < meta.edges[b].size(); ++e) {
        if (e < pg.size()) {
          std::copy(pg[e].forward.data().begin(), pg[e].forward.data().end(), dout.row(r).begin());
          std::copy(pg[e].backward.data().begin(), pg[e].backward.data().end(),
                    dout.row(r + 1).begin());
        }
        r += 2;
      }
    }
    df += payoff_->backward(dout);
  }
  Matrix dx = df;
  if (generator_) {
    dx = generator_->convolve_backward(df);
    for (auto& g : meta.dynamic) generator_->graph_backward(*g);
  }
  encoder_.backward_step(dx);
}

void CoordinationNet::end_backward() {
  if (generator_ && static_graph_) generator_->graph_backward(*static_graph_);
  encoder_.end_backward();
}

FactoredQ CoordinationNet::build_factored_q(const Matrix& x, const McgOutput* mcg) {
  if (x.rows() != cfg_.n_agents) {
    throw DimensionError("build_factored_q: features " + x.shape_string() + " for " +
                         std::to_string(cfg_.n_agents) + " agents");
  }
  if (generator_ && mcg == nullptr) {
    throw ConfigError("build_factored_q: algo " + std::string(to_string(cfg_.algo)) +
                      " requires a generator output");
  }
  StepMeta meta;
  const std::size_t saved_batch = batch_;
  batch_ = 1;
  const bool saved = recording_;
  set_recording(false);
  meta.edges.assign(1, generator_ ? mcg->edges : dcg_edges_);
  auto out = heads(generator_ ? mcg->z : x, meta);
  set_recording(saved);
  batch_ = saved_batch;
  return std::move(out.front());
}

JointAction CoordinationNet::greedy(const FactoredQ& fq) const {
  return greedy_action(fq, cfg_.msgpass_iterations);
}

ParameterList CoordinationNet::parameters() {
  ParameterList out = encoder_.parameters();
  if (generator_) {
    for (auto* p : generator_->parameters()) out.push_back(p);
  }
  for (auto* p : utility_.parameters()) out.push_back(p);
  if (payoff_) {
    for (auto* p : payoff_->parameters()) out.push_back(p);
  }
  return out;
}

void CoordinationNet::set_recording(bool on) {
  recording_ = on;
  encoder_.set_recording(on);
  if (generator_) generator_->set_recording(on);
  utility_.set_recording(on);
  if (payoff_) payoff_->set_recording(on);
}

void CoordinationNet::clear_caches() {
  encoder_.clear_cache();
  if (generator_) generator_->clear_cache();
  utility_.clear_cache();
  if (payoff_) payoff_->clear_cache();
  meta_.clear();
}

void sync_target(CoordinationNet& online, CoordinationNet& target) {
  const auto src = online.parameters();
  const auto dst = target.parameters();
  if (src.size() != dst.size()) {
    throw ConfigError("sync_target: parameter count mismatch (" + std::to_string(src.size()) +
                      " vs " + std::to_string(dst.size()) + ")");
  }
  for (std::size_t k = 0; k < src.size(); ++k) {
    if (src[k]->name != dst[k]->name || !src[k]->value.same_shape(dst[k]->value)) {
      throw ConfigError("sync_target: parameter '" + src[k]->name + "' does not match '" +
                        dst[k]->name + "'");
    }
  }
  for (std::size_t k = 0; k < src.size(); ++k) dst[k]->value = src[k]->value;
}

}  // namespace mcg
