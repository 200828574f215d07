#include "mcg/numerics/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "mcg/errors.hpp"

namespace mcg {

namespace {

double checked_eval(const LossFunction& f, bool with_grad) {
  const double v = f(with_grad);
  if (!std::isfinite(v)) throw NumericError("finite_diff_check: loss is not finite");
  return v;
}

}  // namespace

GradCheckResult finite_diff_check(const LossFunction& f, const ParameterList& params,
                                  double h) {
  zero_grads(params);
  checked_eval(f, true);
  std::vector<Matrix> analytic;
  analytic.reserve(params.size());
  for (const auto* p : params) analytic.push_back(p->grad);

  GradCheckResult result;
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto values = params[k]->value.data();
    const auto grads = analytic[k].data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + h;
      const double plus = checked_eval(f, false);
      values[i] = saved - h;
      const double minus = checked_eval(f, false);
      values[i] = saved;
      const double numeric = (plus - minus) / (2.0 * h);
      const double err = std::abs(grads[i] - numeric) / std::max(1.0, std::abs(numeric));
      if (err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_parameter = params[k]->name;
      }
      ++result.checked;
    }
  }
  zero_grads(params);
  return result;
}

}  // namespace mcg
