#pragma once

#include "mcg/envs/environment.hpp"

namespace mcg {

// Each step one hospital j needs x_j ~ U{1..agents} staff; every agent picks
// a hospital. Reward min(y_j − x_j, 0) with y_j the agents that chose j.
class DisperseEnv : public Environment {
 public:
  struct Config {
    std::size_t agents = 12;
    std::size_t hospitals = 4;
    std::size_t episode_limit = 10;
  };

  DisperseEnv(Config cfg, std::uint64_t seed);

  std::string_view name() const override { return "disperse"; }
  EnvSpec spec() const override;

  std::size_t needy_hospital() const { return needy_; }
  std::size_t demand() const { return demand_; }
  // Overrides the current requirement (tests).
  void set_demand(std::size_t hospital, std::size_t demand);

 protected:
  Matrix do_reset() override;
  StepResult do_step(const JointAction& actions) override;

 private:
  void draw_demand();
  Matrix observe() const;

  Config cfg_;
  std::size_t needy_ = 0;
  std::size_t demand_ = 1;
  std::vector<std::size_t> last_choice_;
  std::size_t steps_ = 0;
};

}  // namespace mcg
