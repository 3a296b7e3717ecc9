#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "zob/metrics/metrics.hpp"

namespace zob {

template <typename Scalar>
struct MoreauOptions {
  /// Iteration cap of each inner minimization over u.
  int max_iters = 10000;
  /// Tolerance on the inner (projected) gradient norm.
  Scalar tolerance = Scalar(1e-8);
  /// Cap on dual updates (bisection steps when d_y = 1).
  int max_dual_iters = 10000;
  bool project_x = true;
  bool allow_approximate = false;
};

template <typename Scalar>
struct MoreauResult {
  /// ||grad Phi_{1/2L}(x)|| = 2L ||x - x_hat||.
  Scalar norm{};
  Vector<Scalar> x_hat;
  Vector<Scalar> y_hat;
  /// Phi(x_hat) + L ||x_hat - x||^2.
  Scalar envelope{};
  Scalar residual{};
  int iterations = 0;
};

namespace detail {

/// Minimizes F_y(u) = f(u, y) + L ||u - x||^2 (over the x box when requested)
/// by projected gradient with Armijo backtracking. Returns the inner residual.
template <typename Scalar>
Scalar moreau_inner(OracleProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y, Scalar L,
                    const MoreauOptions<Scalar>& opts, Vector<Scalar>& u, LocalModel<Scalar>& model,
                    int& iterations) {
  const bool boxed = uses_box(problem, opts.project_x);
  const MetricsToken token = MetricsAccess::token();
  auto objective = [&](const Evaluation<Scalar>& e, const Vector<Scalar>& at) {
    return lagrangian(e, y) + L * (at - x).squaredNorm();
  };
  auto project = [&](Vector<Scalar> v) { return boxed ? project_box(v, *problem.x_box()) : v; };

  Scalar step = Scalar(1) / (Scalar(2) * L);
  model = observe_for_metrics(problem, u, opts.allow_approximate);
  for (int it = 0;; ++it) {
    const Vector<Scalar> grad = model.lagrangian_gradient(y) + Scalar(2) * L * (u - x);
    const Scalar residual = boxed ? (u - project(u - grad)).norm() : grad.norm();
    if (residual <= opts.tolerance || it >= opts.max_iters) {
      iterations += it;
      return residual;
    }
    const Scalar f0 = objective(model.value, u);
    for (int bt = 0;; ++bt) {
      const Vector<Scalar> cand = project(u - step * grad);
      const Vector<Scalar> delta = cand - u;
      const Scalar f1 = objective(problem.evaluate_clean(cand, token), cand);
      if (f1 <= f0 + grad.dot(delta) + delta.squaredNorm() / (Scalar(2) * step) + detail::roundoff(f0) || bt >= 60) {
        u = cand;
        step *= Scalar(1.5);
        break;
      }
      step *= Scalar(0.5);
    }
    model = observe_for_metrics(problem, u, opts.allow_approximate);
  }
}

}  // namespace detail

/// Proximal point x_hat = argmin_u Phi(u) + L ||u - x||^2 and the Moreau
/// envelope gradient norm 2L ||x - x_hat||.
///
/// The minimax form min_u max_{0<=y<=y_upper} f(u, y) + L ||u - x||^2 is
/// solved in the dual: for d_y = 1 the dual derivative c(u_y) is
/// non-increasing in y and y is found by bisection; otherwise by projected
/// dual ascent. Each dual iterate solves the strongly convex inner problem.
template <typename Scalar>
MoreauResult<Scalar> moreau_gradient(OracleProblem<Scalar>& problem, const Vector<Scalar>& x, Scalar L,
                                     const MoreauOptions<Scalar>& opts = {}) {
  if (!(L > Scalar(0))) throw InvalidParameterError("moreau_gradient: L must be > 0");
  if (x.size() != problem.dim_x()) throw DimensionError("moreau_gradient: x length must equal dim_x");

  const Vector<Scalar>& y_upper = problem.y_upper();
  const Index dy = problem.dim_y();
  MoreauResult<Scalar> out;
  Vector<Scalar> u = detail::uses_box(problem, opts.project_x) ? project_box(x, *problem.x_box()) : x;
  Vector<Scalar> y = Vector<Scalar>::Zero(dy);
  LocalModel<Scalar> model;
  Scalar residual = detail::moreau_inner(problem, x, y, L, opts, u, model, out.iterations);

  if (dy == 1 && model.value.c(0) > Scalar(0)) {
    Vector<Scalar> u_top = u;
    Vector<Scalar> y_top = y_upper;
    LocalModel<Scalar> top_model;
    const Scalar top_res = detail::moreau_inner(problem, x, y_top, L, opts, u_top, top_model, out.iterations);
    if (top_model.value.c(0) >= Scalar(0)) {
      u = u_top;
      y = y_top;
      model = top_model;
      residual = top_res;
    } else {
      Scalar lo = 0;
      Scalar hi = y_upper(0);
      for (int it = 0; it < opts.max_dual_iters; ++it) {
        y(0) = Scalar(0.5) * (lo + hi);
        residual = detail::moreau_inner(problem, x, y, L, opts, u, model, out.iterations);
        const Scalar c = model.value.c(0);
        if (c > Scalar(0))
          lo = y(0);
        else
          hi = y(0);
        if (std::abs(c) <= opts.tolerance || hi - lo <= std::numeric_limits<Scalar>::epsilon() * y_upper(0))
          break;
      }
    }
  } else if (dy > 1) {
    const Scalar jnorm = model.grads.jac_c.squaredNorm();
    const Scalar eta = jnorm > Scalar(0) ? L / jnorm : Scalar(1);
    for (int it = 0; it < opts.max_dual_iters; ++it) {
      const Vector<Scalar> next = project_dual(Vector<Scalar>(y + eta * model.value.c), y_upper);
      const Scalar dual_res = (next - y).norm() / eta;
      if (dual_res <= opts.tolerance) break;
      y = next;
      residual = detail::moreau_inner(problem, x, y, L, opts, u, model, out.iterations);
    }
  }

  if (!(residual <= opts.tolerance)) {
    std::ostringstream os;
    os << "moreau_gradient: inner solver did not reach tolerance " << opts.tolerance << " (residual "
       << residual << ")";
    throw ConvergenceError(os.str(), static_cast<double>(residual));
  }
  out.x_hat = u;
  out.y_hat = y;
  out.residual = residual;
  out.norm = Scalar(2) * L * (x - u).norm();
  out.envelope = phi_from_value(model.value, y_upper) + L * (u - x).squaredNorm();
  return out;
}

}  // namespace zob
