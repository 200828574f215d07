#include "mcg/envs/pursuit.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "mcg/errors.hpp"

namespace mcg {

PursuitEnv::PursuitEnv(Config cfg, std::uint64_t seed) : Environment(seed), cfg_(cfg) {
  if (cfg_.predators < 1 || cfg_.grid < 3 || cfg_.episode_limit < 1) {
    throw ConfigError("pursuit: needs predators, a grid of at least 3 and a positive episode limit");
  }
  if (cfg_.predators + cfg_.prey > cfg_.grid * cfg_.grid) {
    throw ConfigError("pursuit: more animals than grid cells");
  }
}

EnvSpec PursuitEnv::spec() const {
  const std::size_t side = 2 * cfg_.view_radius + 1;
  return {cfg_.predators, kNumActions, 2 * side * side, cfg_.episode_limit,
          TaskMetric::kPreyCaught};
}

PursuitEnv::Cell PursuitEnv::wrap(int row, int col) const {
  const int g = static_cast<int>(cfg_.grid);
  return {((row % g) + g) % g, ((col % g) + g) % g};
}

int PursuitEnv::chebyshev(const Cell& a, const Cell& b) const {
  const int g = static_cast<int>(cfg_.grid);
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  return std::max(std::min(dr, g - dr), std::min(dc, g - dc));
}

int PursuitEnv::manhattan(const Cell& a, const Cell& b) const {
  const int g = static_cast<int>(cfg_.grid);
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  return std::min(dr, g - dr) + std::min(dc, g - dc);
}

PursuitEnv::Cell PursuitEnv::moved(const Cell& c, std::size_t action) const {
  switch (action) {
    case kUp: return wrap(c.row - 1, c.col);
    case kDown: return wrap(c.row + 1, c.col);
    case kLeft: return wrap(c.row, c.col - 1);
    case kRight: return wrap(c.row, c.col + 1);
    default: return c;
  }
}

Matrix PursuitEnv::observe() const {
  const int r = static_cast<int>(cfg_.view_radius);
  const std::size_t side = 2 * cfg_.view_radius + 1;
  const std::size_t layer = side * side;
  Matrix obs(cfg_.predators, 2 * layer);
  auto offset = [&](const Cell& self, const Cell& other) -> std::ptrdiff_t {
    const int g = static_cast<int>(cfg_.grid);
    int dr = ((other.row - self.row) % g + g) % g;
    int dc = ((other.col - self.col) % g + g) % g;
    if (dr > g / 2) dr -= g;
    if (dc > g / 2) dc -= g;
    if (std::abs(dr) > r || std::abs(dc) > r) return -1;
    return static_cast<std::ptrdiff_t>((dr + r) * static_cast<int>(side) + (dc + r));
  };
  for (std::size_t i = 0; i < cfg_.predators; ++i) {
    auto row = obs.row(i);
    for (std::size_t j = 0; j < cfg_.predators; ++j) {
      if (j == i) continue;
      const auto k = offset(predators_[i], predators_[j]);
      if (k >= 0) row[static_cast<std::size_t>(k)] = 1.0;
    }
    for (const auto& p : prey_) {
      const auto k = offset(predators_[i], p);
      if (k >= 0) row[layer + static_cast<std::size_t>(k)] = 1.0;
    }
  }
  return obs;
}

Matrix PursuitEnv::do_reset() {
  std::vector<std::size_t> cells(cfg_.grid * cfg_.grid);
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), rng_);
  const int g = static_cast<int>(cfg_.grid);
  auto cell = [g](std::size_t k) { return Cell{static_cast<int>(k) / g, static_cast<int>(k) % g}; };
  predators_.clear();
  prey_.clear();
  for (std::size_t i = 0; i < cfg_.predators; ++i) predators_.push_back(cell(cells[i]));
  for (std::size_t i = 0; i < cfg_.prey; ++i) prey_.push_back(cell(cells[cfg_.predators + i]));
  caught_ = 0;
  steps_ = 0;
  return observe();
}

void PursuitEnv::set_state(std::vector<Cell> predators, std::vector<Cell> prey) {
  if (predators.size() != cfg_.predators || prey.size() > cfg_.prey) {
    throw ArgumentError("pursuit: bad state");
  }
  predators_ = std::move(predators);
  prey_ = std::move(prey);
  caught_ = cfg_.prey - prey_.size();
}

StepResult PursuitEnv::do_step(const JointAction& actions) {
  StepResult r;
  // Captures are resolved on the pre-move positions.
  std::vector<Cell> survivors;
  for (const auto& p : prey_) {
    std::size_t catchers = 0;
    for (std::size_t i = 0; i < cfg_.predators; ++i) {
      if (actions[i] == kCatch && manhattan(predators_[i], p) == 1) ++catchers;
    }
    if (catchers >= 2) {
      r.reward += 1.0;
      ++caught_;
    } else {
      if (catchers == 1) r.reward -= 1.0;
      survivors.push_back(p);
    }
  }
  prey_ = std::move(survivors);

  auto has_prey = [this](const Cell& c) { return std::find(prey_.begin(), prey_.end(), c) != prey_.end(); };
  for (std::size_t i = 0; i < cfg_.predators; ++i) {
    const Cell next = moved(predators_[i], actions[i]);
    if (!has_prey(next)) predators_[i] = next;
  }
  std::uniform_int_distribution<std::size_t> move(0, kStay);
  for (auto& p : prey_) {
    const Cell next = moved(p, move(rng_));
    const bool blocked =
        std::find(predators_.begin(), predators_.end(), next) != predators_.end() ||
        (!(next == p) && has_prey(next));
    if (!blocked) p = next;
  }
  ++steps_;
  r.terminated = prey_.empty() || steps_ >= cfg_.episode_limit;
  r.obs = observe();
  return r;
}

std::optional<AdjacencyTensor> PursuitEnv::interaction_graphs() const {
  const std::size_t n = cfg_.predators;
  const int radius = static_cast<int>(cfg_.graph_radius);
  const int view = static_cast<int>(cfg_.view_radius);
  Matrix proximity(n, n);
  Matrix shared(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (chebyshev(predators_[i], predators_[j]) <= radius) proximity(i, j) = 1.0;
      for (const auto& p : prey_) {
        if (chebyshev(predators_[i], p) <= view && chebyshev(predators_[j], p) <= view) {
          shared(i, j) = 1.0;
          break;
        }
      }
    }
  }
  return AdjacencyTensor({std::move(proximity), std::move(shared)});
}

}  // namespace mcg
