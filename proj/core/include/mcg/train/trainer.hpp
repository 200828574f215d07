#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>

#include "mcg/coord/network.hpp"
#include "mcg/errors.hpp"
#include "mcg/envs/environment.hpp"
#include "mcg/numerics/adam.hpp"
#include "mcg/train/metrics.hpp"
#include "mcg/train/replay.hpp"

namespace mcg {

struct TrainConfig {
  double gamma = 0.99;
  AdamConfig adam;
  std::size_t batch_episodes = 16;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  std::uint64_t epsilon_anneal_steps = 50000;
  std::uint64_t target_sync_interval = 200;  // in updates
  std::uint64_t total_env_steps = 50000;
  std::uint64_t eval_interval = 5000;  // in env steps
  std::size_t eval_episodes = 20;
  std::size_t buffer_capacity = 2000;
  double grad_clip = 10.0;
  std::uint64_t seed = 0;

  void validate() const;
  // Linear schedule clamped at epsilon_end.
  double epsilon_at(std::uint64_t env_steps) const;
};

// Thrown when the TD loss is non-finite or exceeds the divergence bound.
class DivergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

inline constexpr double kDivergenceBound = 1e6;

// Rolls out one episode. Each agent independently takes a uniform random
// action with probability epsilon, otherwise its component of the greedy
// joint action. With epsilon >= 1 the network is never evaluated.
EpisodeRecord collect_episode(Environment& env, CoordinationNet& net, double epsilon, Rng& rng);

// One double-Q TD update over a batch of episodes: the online network picks
// the next joint action, the target network evaluates it; terminal steps
// regress onto the reward. Returns the mean squared TD error and applies one
// optimizer step. Throws DivergenceError if the loss is non-finite or above
// kDivergenceBound.
double td_update(std::span<const EpisodeRecord* const> batch, CoordinationNet& online,
                 CoordinationNet& target, Adam& optimizer, const TrainConfig& cfg);

// Loss and gradients without the optimizer step (gradients are accumulated
// into the online network's parameters).
double td_loss_and_grad(std::span<const EpisodeRecord* const> batch, CoordinationNet& online,
                        CoordinationNet& target, double gamma);

struct EvalResult {
  double return_mean = 0.0;
  double return_std = 0.0;
  double metric = 0.0;
  std::size_t episodes = 0;
};

// Greedy (epsilon = 0) rollouts; each episode resets `env` with a seed drawn
// from `eval_rng`.
EvalResult evaluate(Environment& env, CoordinationNet& net, std::size_t episodes, Rng& eval_rng);

// NetConfig dimensions filled in from an environment.
NetConfig net_config_for(const Environment& env, NetConfig base);

struct TrainerIdentity {
  std::string run_id;
  std::string env_name;
  EnvOptions env_options;
};

// Owns the environments, online/target networks, replay and optimizer for one
// seed and runs the full loop.
class Trainer {
 public:
  using RowCallback = std::function<void(const MetricsRow&, CoordinationNet&)>;

  Trainer(TrainerIdentity id, NetConfig net, TrainConfig train);

  // Runs until total_env_steps. Calls `on_eval` for every evaluation,
  // including one before training starts.
  void run(const RowCallback& on_eval);

  CoordinationNet& online() { return *online_; }
  CoordinationNet& target() { return *target_; }
  std::uint64_t env_steps() const { return env_steps_; }
  std::uint64_t updates() const { return updates_; }
  std::uint64_t target_syncs() const { return syncs_; }

 private:
  MetricsRow evaluate_now();

  TrainerIdentity id_;
  TrainConfig cfg_;
  std::unique_ptr<Environment> env_;
  std::unique_ptr<Environment> eval_env_;
  std::unique_ptr<CoordinationNet> online_;
  std::unique_ptr<CoordinationNet> target_;
  std::unique_ptr<Adam> optimizer_;
  ReplayBuffer buffer_;
  Rng rng_;
  Rng eval_rng_;
  std::uint64_t env_steps_ = 0;
  std::uint64_t episodes_ = 0;
  std::uint64_t updates_ = 0;
  std::uint64_t syncs_ = 0;
  double last_loss_ = 0.0;
};

}  // namespace mcg
