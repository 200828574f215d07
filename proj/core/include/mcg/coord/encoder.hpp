#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "mcg/numerics/layers.hpp"

namespace mcg {

inline constexpr std::size_t kNoAction = std::numeric_limits<std::size_t>::max();

struct EncoderConfig {
  std::size_t n_agents = 0;
  std::size_t n_actions = 0;
  std::size_t obs_dim = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;

  std::size_t input_dim() const { return obs_dim + n_actions + n_agents; }
};

// Shared recurrent encoder for all agents. Each agent's input at step t is
// [obs ‖ one-hot(previous action) ‖ one-hot(agent id)] → ReLU(embed) → GRU.
// Rows are agents; a batch of B episodes stacks B blocks of n rows.
class AgentEncoder {
 public:
  AgentEncoder() = default;
  AgentEncoder(EncoderConfig cfg, Rng& rng);

  const EncoderConfig& config() const { return cfg_; }

  // Zeroes hidden states for `batch` episodes.
  void begin_episode(std::size_t batch);
  bool in_episode() const { return batch_ > 0; }

  // Advances every agent by one step and returns the new hidden states.
  // prev_actions holds one entry per row, kNoAction at the first step.
  Matrix encode_step(const Matrix& obs, std::span<const std::size_t> prev_actions);

  // Backpropagates dL/dX for the most recent unprocessed step (reverse time
  // order); the recurrent gradient is carried to the previous step.
  void backward_step(const Matrix& dx);
  // Resets the carried recurrent gradient.
  void end_backward();

  const Matrix& hidden() const { return h_; }
  Matrix build_inputs(const Matrix& obs, std::span<const std::size_t> prev_actions) const;

  ParameterList parameters();
  void set_recording(bool on);
  void clear_cache();

 private:
  EncoderConfig cfg_;
  Linear embed_;
  GruCell gru_;
  Matrix h_;
  Matrix carry_;
  std::vector<Matrix> embed_out_;
  std::size_t batch_ = 0;
  bool recording_ = true;
};

// Per-agent utilities: one linear map from a node representation to action
// values.
class UtilityHead {
 public:
  UtilityHead() = default;
  UtilityHead(std::size_t input_dim, std::size_t n_actions, Rng& rng);

  Matrix forward(const Matrix& z) { return linear_.forward(z); }
  Matrix backward(const Matrix& upstream) { return linear_.backward(upstream); }

  ParameterList parameters() { return linear_.parameters(); }
  void set_recording(bool on) { linear_.set_recording(on); }
  void clear_cache() { linear_.clear_cache(); }

 private:
  Linear linear_;
};

// Ordered node pair (i, j) addressing rows of a feature matrix.
using NodePair = std::pair<std::size_t, std::size_t>;

// Pairwise payoffs: (z_i ‖ z_j) → ReLU hidden layer → |A|×|A| table, row
// index a_i, column index a_j. One shared head serves both orientations.
// The hidden layer is evaluated as z_i·W_top + z_j·W_bottom + b so the
// per-node products are computed once however many pairs share a node.
class PayoffHead {
 public:
  PayoffHead() = default;
  PayoffHead(std::size_t input_dim, std::size_t hidden_dim, std::size_t n_actions, Rng& rng);

  std::size_t n_actions() const { return n_actions_; }

  // z: N × D node features; returns one |A|² row per pair.
  Matrix forward(const Matrix& z, std::span<const NodePair> pairs);
  // Returns dL/dz (N × D).
  Matrix backward(const Matrix& upstream);

  ParameterList parameters();
  void set_recording(bool on);
  void clear_cache();

 private:
  std::size_t n_actions_ = 0;
  Linear hidden_;
  Linear out_;
  struct Cache {
    Matrix z;
    std::vector<NodePair> pairs;
    Matrix hidden;
  };
  std::vector<Cache> cache_;
  bool recording_ = true;
};

}  // namespace mcg
