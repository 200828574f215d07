#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mcg/coord/encoder.hpp"
#include "mcg/coord/factored_q.hpp"
#include "mcg/graph/adjacency.hpp"
#include "mcg/mcgnet/generator.hpp"

namespace mcg {

enum class Algo { kIql, kVdn, kDcg, kDmcg, kDmcgVdn };

// Accepts iql|vdn|dcg|dmcg|dmcg_vdn.
Algo parse_algo(std::string_view name);
std::string_view to_string(Algo algo);

bool uses_generator(Algo algo);
bool uses_payoffs(Algo algo);

struct NetConfig {
  Algo algo = Algo::kDmcg;
  std::size_t n_agents = 0;
  std::size_t n_actions = 0;
  std::size_t obs_dim = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;
  std::size_t payoff_hidden = 32;

  MetaPathConfig mcg;
  bool bypass = false;
  Activation activation = Activation::kRelu;
  // Initial typed layers when the environment supplies no graphs.
  std::vector<TopologyKind> topologies = {TopologyKind::kFull};
  // Number of per-step layers supplied by the environment; 0 means static
  // topologies are used.
  std::size_t dynamic_layers = 0;
  TopologyKind dcg_topology = TopologyKind::kFull;
  std::size_t msgpass_iterations = 8;

  void validate() const;
};

// Encoder, optional meta coordination graph generator, and utility/payoff
// heads for one algorithm. Runs B episodes in lockstep; each step returns one
// FactoredQ per episode.
class CoordinationNet {
 public:
  CoordinationNet(NetConfig cfg, std::uint64_t seed);

  CoordinationNet(const CoordinationNet&) = delete;
  CoordinationNet& operator=(const CoordinationNet&) = delete;
  CoordinationNet(CoordinationNet&&) = default;
  CoordinationNet& operator=(CoordinationNet&&) = default;

  const NetConfig& config() const { return cfg_; }
  std::size_t feature_dim() const;

  void begin_episode(std::size_t batch);

  // obs has batch·n rows. dynamic_graphs, when the config expects them, holds
  // one tensor per episode (without the identity layer).
  std::vector<FactoredQ> step(const Matrix& obs, std::span<const std::size_t> prev_actions,
                              std::span<const AdjacencyTensor> dynamic_graphs = {});

  // Reverse-time backward for the newest un-backpropagated step.
  void backward_step(std::span<const FactoredQGrad> grads);
  // Flushes static-graph gradients into the selection weights and resets
  // recurrent carries. Call once after the last backward_step.
  void end_backward();

  // Builds the factored value for one episode from node features (n × d)
  // and, for generator modes, the generator output. Not recorded for
  // backward.
  FactoredQ build_factored_q(const Matrix& x, const McgOutput* mcg);

  JointAction greedy(const FactoredQ& fq) const;

  ParameterList parameters();
  void set_recording(bool on);
  void clear_caches();

  AgentEncoder& encoder() { return encoder_; }
  McgGenerator* generator() { return generator_ ? &*generator_ : nullptr; }
  const AdjacencyTensor& static_graph() const { return static_tensor_; }
  const EdgeSet& dcg_edges() const { return dcg_edges_; }

 private:
  struct StepMeta {
    std::vector<EdgeSet> edges;
    std::vector<std::shared_ptr<McgGraph>> dynamic;
    bool payoff_forward = false;
  };

  Matrix features(const Matrix& x, std::span<const AdjacencyTensor> dynamic_graphs,
                  StepMeta& meta);
  std::vector<FactoredQ> heads(const Matrix& f, const StepMeta& meta);

  NetConfig cfg_;
  AgentEncoder encoder_;
  std::optional<McgGenerator> generator_;
  UtilityHead utility_;
  std::optional<PayoffHead> payoff_;
  AdjacencyTensor static_tensor_;
  EdgeSet dcg_edges_;
  std::shared_ptr<McgGraph> static_graph_;
  std::vector<StepMeta> meta_;
  std::size_t batch_ = 0;
  bool recording_ = true;
};

// Hard copy of every parameter value. Throws ConfigError if the parameter
// sets differ in names or shapes.
void sync_target(CoordinationNet& online, CoordinationNet& target);

}  // namespace mcg
