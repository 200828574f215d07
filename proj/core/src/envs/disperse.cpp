#include "mcg/envs/disperse.hpp"

#include <algorithm>

#include "mcg/coord/encoder.hpp"
#include "mcg/errors.hpp"

namespace mcg {

DisperseEnv::DisperseEnv(Config cfg, std::uint64_t seed) : Environment(seed), cfg_(cfg) {
  if (cfg_.agents < 1 || cfg_.hospitals < 1 || cfg_.episode_limit < 1) {
    throw ConfigError("disperse: agents, hospitals and episode_limit must be positive");
  }
}

EnvSpec DisperseEnv::spec() const {
  return {cfg_.agents, cfg_.hospitals, 2 * cfg_.hospitals + 1, cfg_.episode_limit,
          TaskMetric::kMeanReturn};
}

void DisperseEnv::set_demand(std::size_t hospital, std::size_t demand) {
  if (hospital >= cfg_.hospitals || demand < 1 || demand > cfg_.agents) {
    throw ArgumentError("disperse: invalid demand");
  }
  needy_ = hospital;
  demand_ = demand;
}

void DisperseEnv::draw_demand() {
  std::uniform_int_distribution<std::size_t> hospital(0, cfg_.hospitals - 1);
  std::uniform_int_distribution<std::size_t> demand(1, cfg_.agents);
  needy_ = hospital(rng_);
  demand_ = demand(rng_);
}

Matrix DisperseEnv::observe() const {
  const std::size_t h = cfg_.hospitals;
  Matrix obs(cfg_.agents, 2 * h + 1);
  for (std::size_t i = 0; i < cfg_.agents; ++i) {
    auto row = obs.row(i);
    row[needy_] = 1.0;
    row[h] = static_cast<double>(demand_) / static_cast<double>(cfg_.agents);
    if (last_choice_[i] != kNoAction) row[h + 1 + last_choice_[i]] = 1.0;
  }
  return obs;
}

Matrix DisperseEnv::do_reset() {
  last_choice_.assign(cfg_.agents, kNoAction);
  steps_ = 0;
  draw_demand();
  return observe();
}

StepResult DisperseEnv::do_step(const JointAction& actions) {
  const auto arrivals =
      static_cast<double>(std::count(actions.begin(), actions.end(), needy_));
  StepResult r;
  r.reward = std::min(arrivals - static_cast<double>(demand_), 0.0);
  last_choice_ = actions;
  ++steps_;
  r.terminated = steps_ >= cfg_.episode_limit;
  draw_demand();
  r.obs = observe();
  return r;
}

}  // namespace mcg
