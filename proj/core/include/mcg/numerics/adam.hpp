#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcg/numerics/parameter.hpp"

namespace mcg {

struct AdamConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  Matrix m;
  Matrix v;
  std::uint64_t step = 0;
};

// One bias-corrected Adam update per parameter. Gradients are left intact;
// the caller zeroes them. Throws ArgumentError if the state count differs
// from the parameter count, DimensionError if a state has the wrong shape.
void adam_step(std::span<Parameter* const> params, std::span<AdamState> states,
               const AdamConfig& cfg);

// Owns one AdamState per parameter.
class Adam {
 public:
  Adam(ParameterList params, AdamConfig cfg);

  void step();
  void zero_grad() { zero_grads(params_); }
  const AdamConfig& config() const { return cfg_; }
  std::span<const AdamState> states() const { return states_; }

 private:
  ParameterList params_;
  std::vector<AdamState> states_;
  AdamConfig cfg_;
};

}  // namespace mcg
