#pragma once

// Thin wrappers over the GSL minimizers used by the optimizers in this
// library. Private to the core target.

#include <cstddef>
#include <functional>

#include "gaussent/phasespace.hpp"

namespace gaussent::detail {

struct MinimizeResult {
  Vector x;
  double f = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct GradientOptions {
  double initial_step = 0.1;
  double line_tol = 0.1;
  double gradient_tol = 1e-12;
  std::size_t max_iterations = 2000;
};

/// Fills the gradient and returns the value. Outside the domain it must
/// return a large finite penalty with a zero gradient.
using ValueAndGradient = std::function<double(const Vector&, Vector&)>;

/// Quasi-Newton descent (GSL vector_bfgs2). Stops on a small gradient or
/// when the line search can make no further progress.
MinimizeResult bfgs(const ValueAndGradient& f, const Vector& x0, const GradientOptions& options = {});

struct ScalarMinimum {
  double x = 0.0;
  double f = 0.0;
  bool converged = false;
};

/// Golden-section search. Requires f(guess) < f(lo) and f(guess) < f(hi);
/// returns nothing useful otherwise (converged == false, x == guess).
ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double guess, double hi,
                             double x_tol, std::size_t max_iterations = 500);

}  // namespace gaussent::detail
