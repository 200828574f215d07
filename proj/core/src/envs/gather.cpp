#include "mcg/envs/gather.hpp"

#include <algorithm>
#include <cstdlib>

#include "mcg/errors.hpp"

namespace mcg {

GatherEnv::GatherEnv(Config cfg, std::uint64_t seed) : Environment(seed), cfg_(cfg) {
  if (cfg_.agents < 1 || cfg_.grid < 3 || cfg_.episode_limit < 1) {
    throw ConfigError("gather: needs at least 1 agent, a 3x3 grid and a positive episode limit");
  }
  const int last = static_cast<int>(cfg_.grid) - 1;
  goals_ = {Cell{0, 0}, Cell{0, last}, Cell{last, 0}};
}

EnvSpec GatherEnv::spec() const {
  return {cfg_.agents, kNumActions, 8, cfg_.episode_limit, TaskMetric::kWinRate};
}

int GatherEnv::goal_at(const Cell& c) const {
  for (std::size_t g = 0; g < goals_.size(); ++g) {
    if (goals_[g] == c) return static_cast<int>(g);
  }
  return -1;
}

Matrix GatherEnv::observe() const {
  const double scale = static_cast<double>(cfg_.grid - 1);
  const Cell& opt = goals_[optimal_];
  Matrix obs(cfg_.agents, 8);
  for (std::size_t i = 0; i < cfg_.agents; ++i) {
    auto row = obs.row(i);
    row[0] = pos_[i].row / scale;
    row[1] = pos_[i].col / scale;
    const int g = goal_at(pos_[i]);
    if (g >= 0) row[2 + g] = 1.0;
    const int dist = std::max(std::abs(pos_[i].row - opt.row), std::abs(pos_[i].col - opt.col));
    if (dist <= static_cast<int>(cfg_.view_radius)) row[5 + optimal_] = 1.0;
  }
  return obs;
}

Matrix GatherEnv::do_reset() {
  std::uniform_int_distribution<std::size_t> goal(0, goals_.size() - 1);
  std::uniform_int_distribution<int> coord(0, static_cast<int>(cfg_.grid) - 1);
  optimal_ = goal(rng_);
  pos_.assign(cfg_.agents, Cell{});
  for (auto& p : pos_) {
    p.row = coord(rng_);
    p.col = coord(rng_);
  }
  steps_ = 0;
  won_ = false;
  return observe();
}

void GatherEnv::set_state(std::vector<Cell> positions, std::size_t optimal) {
  if (positions.size() != cfg_.agents || optimal >= goals_.size()) {
    throw ArgumentError("gather: bad state");
  }
  pos_ = std::move(positions);
  optimal_ = optimal;
}

double GatherEnv::terminal_reward() const {
  std::size_t on_optimal = 0;
  int shared_goal = goal_at(pos_.front());
  for (const auto& p : pos_) {
    const int g = goal_at(p);
    if (g == static_cast<int>(optimal_)) ++on_optimal;
    if (g != shared_goal) shared_goal = -1;
  }
  if (on_optimal == pos_.size()) return 10.0;
  if (on_optimal > 0) return -5.0;
  if (shared_goal >= 0) return 5.0;
  return 0.0;
}

StepResult GatherEnv::do_step(const JointAction& actions) {
  const int last = static_cast<int>(cfg_.grid) - 1;
  for (std::size_t i = 0; i < cfg_.agents; ++i) {
    Cell& p = pos_[i];
    switch (actions[i]) {
      case kUp: p.row = std::max(0, p.row - 1); break;
      case kDown: p.row = std::min(last, p.row + 1); break;
      case kLeft: p.col = std::max(0, p.col - 1); break;
      case kRight: p.col = std::min(last, p.col + 1); break;
      default: break;
    }
  }
  ++steps_;
  const bool all_on_goals =
      std::all_of(pos_.begin(), pos_.end(), [this](const Cell& c) { return goal_at(c) >= 0; });
  StepResult r;
  r.terminated = all_on_goals || steps_ >= cfg_.episode_limit;
  if (r.terminated) {
    r.reward = terminal_reward();
    won_ = r.reward == 10.0;
  }
  r.obs = observe();
  return r;
}

}  // namespace mcg
