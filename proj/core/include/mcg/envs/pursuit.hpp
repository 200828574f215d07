#pragma once

#include "mcg/envs/environment.hpp"

namespace mcg {

// Predators and randomly walking prey on a toroidal grid. A prey with two or
// more catching predators in its 4-neighborhood is captured (+1); a prey with
// exactly one catching neighbor costs −1.
class PursuitEnv : public Environment {
 public:
  struct Config {
    std::size_t predators = 10;
    std::size_t prey = 5;
    std::size_t grid = 10;
    std::size_t episode_limit = 60;
    std::size_t view_radius = 2;   // observation patch is (2r+1)²
    std::size_t graph_radius = 2;  // proximity layer, Chebyshev
  };
  enum Action : std::size_t { kUp = 0, kDown, kLeft, kRight, kStay, kCatch, kNumActions };
  struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell&) const = default;
  };

  PursuitEnv(Config cfg, std::uint64_t seed);

  std::string_view name() const override { return "pursuit"; }
  EnvSpec spec() const override;
  double episode_metric() const override { return static_cast<double>(caught_); }

  // Layer 0: predators within graph_radius of each other. Layer 1: predators
  // that both see at least one common live prey.
  std::optional<AdjacencyTensor> interaction_graphs() const override;
  std::size_t graph_layers() const override { return 2; }

  const std::vector<Cell>& predators() const { return predators_; }
  const std::vector<Cell>& prey() const { return prey_; }  // live prey only
  std::size_t caught() const { return caught_; }
  std::size_t initial_prey() const { return cfg_.prey; }
  void set_state(std::vector<Cell> predators, std::vector<Cell> prey);

  int chebyshev(const Cell& a, const Cell& b) const;
  int manhattan(const Cell& a, const Cell& b) const;
  Matrix observe() const;

 protected:
  Matrix do_reset() override;
  StepResult do_step(const JointAction& actions) override;

 private:
  Cell wrap(int row, int col) const;
  Cell moved(const Cell& c, std::size_t action) const;

  Config cfg_;
  std::vector<Cell> predators_;
  std::vector<Cell> prey_;
  std::size_t caught_ = 0;
  std::size_t steps_ = 0;
};

}  // namespace mcg
