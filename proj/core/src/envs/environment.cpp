#include "mcg/envs/environment.hpp"

#include <cmath>
#include <string>

#include "mcg/errors.hpp"

namespace mcg {

std::string_view to_string(TaskMetric m) {
  switch (m) {
    case TaskMetric::kWinRate: return "win_rate";
    case TaskMetric::kMeanReturn: return "mean_return";
    case TaskMetric::kPreyCaught: return "prey_caught";
  }
  return "?";
}

Matrix Environment::reset() {
  t_ = 0;
  return_ = 0.0;
  terminated_ = false;
  started_ = true;
  return do_reset();
}

Matrix Environment::reset(std::uint64_t seed) {
  rng_.seed(seed);
  return reset();
}

StepResult Environment::step(const JointAction& actions) {
  if (!started_ || terminated_) {
    throw StateError(std::string(name()) + ": step() called on a terminated episode; reset() first");
  }
  const EnvSpec s = spec();
  if (actions.size() != s.n_agents) {
    throw ArgumentError(std::string(name()) + ": expected " + std::to_string(s.n_agents) +
                        " actions, got " + std::to_string(actions.size()));
  }
  for (auto a : actions) {
    if (a >= s.n_actions) {
      throw ArgumentError(std::string(name()) + ": invalid action " + std::to_string(a));
    }
  }
  ++t_;
  StepResult r = do_step(actions);
  if (!std::isfinite(r.reward)) throw NumericError(std::string(name()) + ": non-finite reward");
  return_ += r.reward;
  terminated_ = r.terminated;
  return r;
}

}  // namespace mcg
