#include "minimize.hpp"

#include <cmath>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

namespace gaussent::detail {

namespace {

// GSL aborts on errors by default; every status code is checked here instead.
struct ErrorHandlerOff {
  ErrorHandlerOff() { gsl_set_error_handler_off(); }
};

void disable_gsl_abort() { static const ErrorHandlerOff once; }

struct GradientFn {
  const ValueAndGradient* f;
  Vector x;
  Vector g;
};

void load(const gsl_vector* v, Vector& out) {
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = gsl_vector_get(v, static_cast<std::size_t>(i));
}

void store(const Vector& in, gsl_vector* v) {
  for (Eigen::Index i = 0; i < in.size(); ++i) gsl_vector_set(v, static_cast<std::size_t>(i), in[i]);
}

double gradient_f(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<GradientFn*>(params);
  load(v, ctx->x);
  return (*ctx->f)(ctx->x, ctx->g);
}

void gradient_df(const gsl_vector* v, void* params, gsl_vector* df) {
  auto* ctx = static_cast<GradientFn*>(params);
  load(v, ctx->x);
  (*ctx->f)(ctx->x, ctx->g);
  store(ctx->g, df);
}

void gradient_fdf(const gsl_vector* v, void* params, double* f, gsl_vector* df) {
  auto* ctx = static_cast<GradientFn*>(params);
  load(v, ctx->x);
  *f = (*ctx->f)(ctx->x, ctx->g);
  store(ctx->g, df);
}

double scalar_trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

struct GslVectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct GradientDeleter {
  void operator()(gsl_multimin_fdfminimizer* m) const { gsl_multimin_fdfminimizer_free(m); }
};
struct ScalarDeleter {
  void operator()(gsl_min_fminimizer* m) const { gsl_min_fminimizer_free(m); }
};

}  // namespace

MinimizeResult bfgs(const ValueAndGradient& f, const Vector& x0, const GradientOptions& options) {
  disable_gsl_abort();
  const auto n = static_cast<std::size_t>(x0.size());
  Vector g(x0.size());
  MinimizeResult best{x0, f(x0, g), 0, false};
  if (n == 0) {
    best.converged = true;
    return best;
  }

  GradientFn ctx{&f, Vector(x0.size()), Vector(x0.size())};
  gsl_multimin_function_fdf fn{&gradient_f, &gradient_df, &gradient_fdf, n, &ctx};
  std::unique_ptr<gsl_vector, GslVectorDeleter> x(gsl_vector_alloc(n));
  store(x0, x.get());
  std::unique_ptr<gsl_multimin_fdfminimizer, GradientDeleter> solver(
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n));
  if (gsl_multimin_fdfminimizer_set(solver.get(), &fn, x.get(), options.initial_step, options.line_tol) != GSL_SUCCESS) {
    return best;
  }
  while (best.iterations < options.max_iterations) {
    ++best.iterations;
    const int status = gsl_multimin_fdfminimizer_iterate(solver.get());
    const double fval = gsl_multimin_fdfminimizer_minimum(solver.get());
    if (fval < best.f) {
      load(gsl_multimin_fdfminimizer_x(solver.get()), best.x);
      best.f = fval;
    }
    // ENOPROG: the line search cannot improve on the current point.
    if (status != GSL_SUCCESS) {
      best.converged = status == GSL_ENOPROG;
      break;
    }
    if (gsl_multimin_test_gradient(gsl_multimin_fdfminimizer_gradient(solver.get()), options.gradient_tol) ==
        GSL_SUCCESS) {
      best.converged = true;
      break;
    }
  }
  return best;
}

ScalarMinimum golden_section(const std::function<double(double)>& f, double lo, double guess, double hi,
                             double x_tol, std::size_t max_iterations) {
  disable_gsl_abort();
  ScalarMinimum out{guess, f(guess), false};
  gsl_function fn{&scalar_trampoline, const_cast<std::function<double(double)>*>(&f)};
  std::unique_ptr<gsl_min_fminimizer, ScalarDeleter> solver(
      gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection));
  if (gsl_min_fminimizer_set(solver.get(), &fn, guess, lo, hi) != GSL_SUCCESS) return out;
  // Near a smooth maximum the objective is flat to rounding well before the
  // bracket reaches x_tol; GSL then stops with an error. The bracket at that
  // point already resolves the optimum to machine precision in f.
  const double flat_width = 1e-4 * (hi - lo);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    const int status = gsl_min_fminimizer_iterate(solver.get());
    const double a = gsl_min_fminimizer_x_lower(solver.get());
    const double b = gsl_min_fminimizer_x_upper(solver.get());
    out.x = gsl_min_fminimizer_x_minimum(solver.get());
    out.f = gsl_min_fminimizer_f_minimum(solver.get());
    if (status != GSL_SUCCESS) {
      out.converged = b - a <= flat_width;
      break;
    }
    if (b - a <= x_tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace gaussent::detail
