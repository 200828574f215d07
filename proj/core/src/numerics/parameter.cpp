#include "mcg/numerics/parameter.hpp"

#include <cmath>

namespace mcg {

Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(fan_in, fan_out);
  for (auto& v : m.data()) v = dist(rng);
  return m;
}

void zero_grads(const ParameterList& params) {
  for (auto* p : params) p->zero_grad();
}

double grad_global_norm(const ParameterList& params) {
  double total = 0.0;
  for (const auto* p : params) total += squared_norm(p->grad);
  return std::sqrt(total);
}

double clip_grad_norm(const ParameterList& params, double max_norm) {
  const double norm = grad_global_norm(params);
  if (norm > max_norm && norm > 0.0) {
    const double scale = max_norm / norm;
    for (auto* p : params) p->grad *= scale;
  }
  return norm;
}

void prefix_names(const ParameterList& params, const std::string& prefix) {
  for (auto* p : params) p->name = prefix + p->name;
}

}  // namespace mcg
