#include "mcg/numerics/adam.hpp"

#include <cmath>

#include "mcg/errors.hpp"

namespace mcg {

void adam_step(std::span<Parameter* const> params, std::span<AdamState> states,
               const AdamConfig& cfg) {
  if (params.size() != states.size()) {
    throw ArgumentError("adam_step: " + std::to_string(params.size()) + " parameters but " +
                        std::to_string(states.size()) + " states");
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    AdamState& s = states[k];
    if (s.m.empty() && s.v.empty()) {
      s.m = Matrix(p.value.rows(), p.value.cols());
      s.v = Matrix(p.value.rows(), p.value.cols());
    }
    if (!s.m.same_shape(p.value) || !s.v.same_shape(p.value) || !p.grad.same_shape(p.value)) {
      throw DimensionError("adam_step: state shape mismatch for parameter '" + p.name + "'");
    }
    ++s.step;
    const double t = static_cast<double>(s.step);
    const double c1 = 1.0 - std::pow(cfg.beta1, t);
    const double c2 = 1.0 - std::pow(cfg.beta2, t);
    auto w = p.value.data();
    auto g = p.grad.data();
    auto m = s.m.data();
    auto v = s.v.data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      w[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

Adam::Adam(ParameterList params, AdamConfig cfg)
    : params_(std::move(params)), states_(params_.size()), cfg_(cfg) {}

void Adam::step() { adam_step(params_, states_, cfg_); }

}  // namespace mcg
