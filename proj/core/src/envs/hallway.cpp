#include "mcg/envs/hallway.hpp"

#include <algorithm>

#include "mcg/errors.hpp"

namespace mcg {

HallwayEnv::HallwayEnv(Config cfg, std::uint64_t seed) : Environment(seed), cfg_(cfg) {
  if (cfg_.groups < 1 || cfg_.group_size < 1 || cfg_.length < 1 || cfg_.episode_limit < 1) {
    throw ConfigError("hallway: groups, group_size, length and episode_limit must be positive");
  }
}

EnvSpec HallwayEnv::spec() const {
  return {cfg_.groups * cfg_.group_size, kNumActions, cfg_.length + 1 + cfg_.groups,
          cfg_.episode_limit, TaskMetric::kWinRate};
}

Matrix HallwayEnv::observe() const {
  const std::size_t n = pos_.size();
  Matrix obs(n, cfg_.length + 1 + cfg_.groups);
  for (std::size_t i = 0; i < n; ++i) {
    obs(i, pos_[i]) = 1.0;
    obs(i, cfg_.length + 1 + group_of(i)) = 1.0;
  }
  return obs;
}

Matrix HallwayEnv::do_reset() {
  std::uniform_int_distribution<std::size_t> start(0, cfg_.length - 1);
  pos_.assign(cfg_.groups * cfg_.group_size, 0);
  for (auto& p : pos_) p = start(rng_);
  finished_.assign(cfg_.groups, false);
  groups_scored_ = 0;
  steps_ = 0;
  return observe();
}

void HallwayEnv::set_positions(std::vector<std::size_t> positions) {
  if (positions.size() != pos_.size()) throw ArgumentError("hallway: bad positions");
  for (auto p : positions) {
    if (p > cfg_.length) throw ArgumentError("hallway: position beyond goal");
  }
  pos_ = std::move(positions);
}

StepResult HallwayEnv::do_step(const JointAction& actions) {
  const std::size_t n = pos_.size();
  const std::size_t goal = cfg_.length;
  std::vector<bool> entered(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (finished_[group_of(i)]) continue;
    const std::size_t before = pos_[i];
    if (actions[i] == kLeft && pos_[i] > 0) --pos_[i];
    if (actions[i] == kRight && pos_[i] < goal) ++pos_[i];
    entered[i] = before < goal && pos_[i] == goal;
  }

  std::vector<std::size_t> entering(cfg_.groups, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (entered[i]) ++entering[group_of(i)];
  }
  std::size_t n_groups = 0;
  for (auto c : entering) n_groups += c > 0 ? 1 : 0;

  StepResult r;
  if (n_groups > 1) {
    r.reward = -0.5 * static_cast<double>(n_groups);
    for (std::size_t i = 0; i < n; ++i) {
      if (entered[i]) pos_[i] = 0;
    }
  } else if (n_groups == 1) {
    for (std::size_t g = 0; g < cfg_.groups; ++g) {
      if (entering[g] == 0) continue;
      // A partial entry parks the entrants at the goal and closes the group.
      finished_[g] = true;
      if (entering[g] == cfg_.group_size) {
        r.reward = 1.0;
        ++groups_scored_;
      }
    }
  }
  ++steps_;
  const bool all_closed = std::all_of(finished_.begin(), finished_.end(), [](bool f) { return f; });
  r.terminated = all_closed || steps_ >= cfg_.episode_limit;
  r.obs = observe();
  return r;
}

}  // namespace mcg
