#pragma once

#include <array>

#include "mcg/envs/environment.hpp"

namespace mcg {

// Grid navigation towards one of three corner goals. One goal is chosen as
// optimal per episode; only agents within `view_radius` (Chebyshev) of it see
// its id. Terminal reward: 10 if every agent is on the optimal goal, 5 if
// every agent is on the same other goal, −5 if only some are on the optimal
// goal, 0 otherwise.
class GatherEnv : public Environment {
 public:
  struct Config {
    std::size_t agents = 3;
    std::size_t grid = 7;
    std::size_t episode_limit = 20;
    std::size_t view_radius = 2;
  };
  enum Action : std::size_t { kUp = 0, kDown, kLeft, kRight, kStay, kNumActions };
  struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell&) const = default;
  };

  GatherEnv(Config cfg, std::uint64_t seed);

  std::string_view name() const override { return "gather"; }
  EnvSpec spec() const override;
  double episode_metric() const override { return won_ ? 1.0 : 0.0; }

  const std::array<Cell, 3>& goals() const { return goals_; }
  std::size_t optimal_goal() const { return optimal_; }
  const std::vector<Cell>& positions() const { return pos_; }
  // Places agents and the optimal goal directly (tests).
  void set_state(std::vector<Cell> positions, std::size_t optimal);
  // Terminal reward for the current placement.
  double terminal_reward() const;
  Matrix observe() const;

 protected:
  Matrix do_reset() override;
  StepResult do_step(const JointAction& actions) override;

 private:
  int goal_at(const Cell& c) const;

  Config cfg_;
  std::array<Cell, 3> goals_;
  std::size_t optimal_ = 0;
  std::vector<Cell> pos_;
  std::size_t steps_ = 0;
  bool won_ = false;
};

}  // namespace mcg
