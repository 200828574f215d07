#pragma once

#include "mcg/envs/environment.hpp"

namespace mcg {

// Multi-chain hallway: every agent walks its own chain of `length` cells
// whose right end opens onto a shared goal cell. Agents see only their own
// position and group id.
//   +1        when all members of one group enter the goal on the same step;
//   −0.5·n_g  when members of n_g > 1 groups enter on the same step; those
//             agents are sent back to position 0.
// When only part of a single group enters, the entrants wait in the goal
// cell for the rest of the episode and reward 0; that group can no longer
// score. A group is closed once it scores or is spoiled this way, its agents
// stop moving, and the episode ends when every group is closed or at the
// step limit.
class HallwayEnv : public Environment {
 public:
  struct Config {
    std::size_t groups = 2;
    std::size_t group_size = 2;
    std::size_t length = 6;
    std::size_t episode_limit = 12;
  };
  enum Action : std::size_t { kLeft = 0, kRight, kStay, kNumActions };

  HallwayEnv(Config cfg, std::uint64_t seed);

  std::string_view name() const override { return "hallway"; }
  EnvSpec spec() const override;
  double episode_metric() const override { return groups_scored_ > 0 ? 1.0 : 0.0; }

  std::size_t goal_position() const { return cfg_.length; }
  std::size_t group_of(std::size_t agent) const { return agent / cfg_.group_size; }
  const std::vector<std::size_t>& positions() const { return pos_; }
  // Scored or spoiled groups.
  const std::vector<bool>& finished_groups() const { return finished_; }
  std::size_t groups_scored() const { return groups_scored_; }
  void set_positions(std::vector<std::size_t> positions);

  Matrix observe() const;

 protected:
  Matrix do_reset() override;
  StepResult do_step(const JointAction& actions) override;

 private:
  Config cfg_;
  std::vector<std::size_t> pos_;
  std::vector<bool> finished_;
  std::size_t groups_scored_ = 0;
  std::size_t steps_ = 0;
};

// Single-step two-agent climbing game with a fixed 3×3 shared payoff.
class ClimbEnv : public Environment {
 public:
  static constexpr double kPayoff[3][3] = {
      {11.0, -30.0, 0.0},
      {-30.0, 7.0, 6.0},
      {0.0, 0.0, 5.0},
  };

  explicit ClimbEnv(std::uint64_t seed) : Environment(seed) {}

  std::string_view name() const override { return "climb"; }
  EnvSpec spec() const override { return {2, 3, 1, 1, TaskMetric::kMeanReturn}; }

 protected:
  Matrix do_reset() override { return Matrix(2, 1, 1.0); }
  StepResult do_step(const JointAction& actions) override {
    return {Matrix(2, 1, 1.0), kPayoff[actions[0]][actions[1]], true};
  }
};

}  // namespace mcg
