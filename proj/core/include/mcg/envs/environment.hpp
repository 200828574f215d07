#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mcg/coord/factored_q.hpp"
#include "mcg/graph/adjacency.hpp"
#include "mcg/numerics/matrix.hpp"
#include "mcg/numerics/parameter.hpp"

namespace mcg {

enum class TaskMetric { kWinRate, kMeanReturn, kPreyCaught };
std::string_view to_string(TaskMetric m);

struct EnvSpec {
  std::size_t n_agents = 0;
  std::size_t n_actions = 0;
  std::size_t obs_dim = 0;
  std::size_t episode_limit = 0;
  TaskMetric metric = TaskMetric::kMeanReturn;
};

struct StepResult {
  Matrix obs;  // n_agents × obs_dim
  double reward = 0.0;
  bool terminated = false;
};

// Dec-POMDP stepping interface shared by every environment. Each instance
// owns its RNG; reset(seed) reproduces the initial state bitwise.
class Environment {
 public:
  explicit Environment(std::uint64_t seed) : rng_(seed) {}
  virtual ~Environment() = default;

  virtual std::string_view name() const = 0;
  virtual EnvSpec spec() const = 0;

  Matrix reset();
  Matrix reset(std::uint64_t seed);
  // Throws StateError after termination, ArgumentError on invalid actions.
  StepResult step(const JointAction& actions);

  // Per-step typed interaction graphs, or nullopt when the environment
  // supplies none and configured topologies apply.
  virtual std::optional<AdjacencyTensor> interaction_graphs() const { return std::nullopt; }
  virtual std::size_t graph_layers() const { return 0; }

  bool terminated() const { return terminated_; }
  std::size_t t() const { return t_; }
  double episode_return() const { return return_; }
  // Task metric for the current episode: 1/0 win flag, total return, or prey
  // caught.
  virtual double episode_metric() const { return return_; }

 protected:
  virtual Matrix do_reset() = 0;
  virtual StepResult do_step(const JointAction& actions) = 0;

  Rng rng_;

 private:
  std::size_t t_ = 0;
  double return_ = 0.0;
  bool terminated_ = true;
  bool started_ = false;
};

// Free-form string overrides, keyed by parameter name without the
// "env.<name>." prefix.
using EnvOptions = std::map<std::string, std::string>;

// Accepts gather|disperse|pursuit|hallway|climb. Unknown option keys or
// malformed values throw ConfigError.
std::unique_ptr<Environment> make_environment(std::string_view name, const EnvOptions& options,
                                              std::uint64_t seed);
bool is_environment_name(std::string_view name);
// Parameter names accepted by make_environment for `name`.
std::vector<std::string> environment_parameters(std::string_view name);

}  // namespace mcg
