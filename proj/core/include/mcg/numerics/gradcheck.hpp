#pragma once

#include <functional>

#include "mcg/numerics/parameter.hpp"

namespace mcg {

// Evaluates a scalar loss. When `with_grad` is true the callee must also
// accumulate analytic gradients into the parameters' grad fields.
using LossFunction = std::function<double(bool with_grad)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst_parameter;
};

// Compares analytic gradients against central differences with step h and
// returns max |analytic - numeric| / max(1, |numeric|) over every entry of
// every parameter. Throws NumericError if the loss is ever non-finite.
GradCheckResult finite_diff_check(const LossFunction& f, const ParameterList& params,
                                  double h = 1e-5);

}  // namespace mcg
