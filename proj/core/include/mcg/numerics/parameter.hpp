#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mcg/numerics/matrix.hpp"

namespace mcg {

using Rng = std::mt19937_64;

// A learnable tensor with its accumulated gradient.
struct Parameter {
  Parameter() = default;
  Parameter(std::string name, Matrix value)
      : name(std::move(name)), value(std::move(value)), grad(this->value.rows(), this->value.cols()) {}

  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.set_zero(); }
};

using ParameterList = std::vector<Parameter*>;

// Glorot-uniform weights in ±sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);

void zero_grads(const ParameterList& params);
double grad_global_norm(const ParameterList& params);
// Rescales all gradients so their joint L2 norm is at most `max_norm`.
// Returns the norm before clipping.
double clip_grad_norm(const ParameterList& params, double max_norm);

// Prefixes every parameter name, e.g. "encoder." + "gru.w_x".
void prefix_names(const ParameterList& params, const std::string& prefix);

}  // namespace mcg
