#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "zob/algorithms/projection.hpp"
#include "zob/problems/oracle_problem.hpp"

namespace zob {

/// Norms of the proximal-gradient stationarity g(x, y) = (g_x, g_y), the
/// optional Moreau-envelope gradient norm, and M = min of the two.
template <typename Scalar>
struct StationarityReport {
  Scalar g_x_norm{};
  Scalar g_y_norm{};
  Scalar g_norm{};
  std::optional<Scalar> moreau_norm;
  Scalar M{};
  bool approximate = false;

  void set_moreau(Scalar norm) {
    moreau_norm = norm;
    M = std::min(g_norm, norm);
  }
};

/// Critical-KKT residuals. A point passes at eps when every residual is <= eps
/// and y >= 0; `dual_below_upper` reports whether y < y_upper strictly.
template <typename Scalar>
struct KKTReport {
  Scalar grad_lagrangian_norm{};
  Scalar max_violation{};
  Scalar max_compl_slack{};
  bool dual_nonneg_ok = true;
  bool dual_below_upper = true;
  bool approximate = false;

  bool passes(Scalar eps) const {
    return grad_lagrangian_norm <= eps && max_violation <= eps && max_compl_slack <= eps && dual_nonneg_ok;
  }
};

template <typename Scalar>
struct MetricsOptions {
  /// Dual step size of the solver being measured.
  Scalar beta = Scalar(1);
  /// Primal step size for the projected g_x; 1 when unset.
  std::optional<Scalar> alpha;
  /// Use the projected forms when the problem carries an x box.
  bool project_x = true;
  /// Fall back to forward differences of the clean channel when the problem
  /// has no analytic gradients (result flagged approximate).
  bool allow_approximate = false;
  Scalar fd_radius = Scalar(1e-6);
};

/// Clean observation and first-order information at one point.
template <typename Scalar>
struct LocalModel {
  Evaluation<Scalar> value;
  TrueGradients<Scalar> grads;
  bool approximate = false;

  Vector<Scalar> lagrangian_gradient(const Vector<Scalar>& y) const {
    if (y.size() == 0) return grads.grad_h;
    return grads.grad_h + grads.jac_c.transpose() * y;
  }
};

/// Evaluates the clean channel and gradients at x, charging the metrics budget.
template <typename Scalar>
LocalModel<Scalar> observe_for_metrics(OracleProblem<Scalar>& problem, const Vector<Scalar>& x,
                                       bool allow_approximate = false, Scalar fd_radius = Scalar(1e-6)) {
  const MetricsToken token = MetricsAccess::token();
  LocalModel<Scalar> m;
  m.value = problem.evaluate_clean(x, token);
  if (problem.has_true_gradients()) {
    m.grads = problem.true_gradients(x, token);
    return m;
  }
  if (!allow_approximate)
    throw UnsupportedMetricError("problem '" + problem.name() +
                                 "' has no true gradients; stationarity metrics are unavailable");
  const Index d = problem.dim_x();
  m.approximate = true;
  m.grads.grad_h.resize(d);
  m.grads.jac_c.resize(problem.dim_y(), d);
  Vector<Scalar> probe = x;
  for (Index i = 0; i < d; ++i) {
    probe(i) = x(i) + fd_radius;
    const Evaluation<Scalar> e = problem.evaluate_clean(probe, token);
    m.grads.grad_h(i) = (e.h - m.value.h) / fd_radius;
    m.grads.jac_c.col(i) = (e.c - m.value.c) / fd_radius;
    probe(i) = x(i);
  }
  return m;
}

namespace detail {

template <typename Scalar>
void check_point(const OracleProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y) {
  if (x.size() != problem.dim_x()) throw DimensionError("metrics: x length must equal dim_x");
  if (y.size() != problem.dim_y()) throw DimensionError("metrics: y length must equal dim_y");
}

/// Slack for sufficient-decrease tests whose decrease is below rounding.
template <typename Scalar>
Scalar roundoff(Scalar f) {
  return Scalar(16) * std::numeric_limits<Scalar>::epsilon() * (std::abs(f) + Scalar(1));
}

template <typename Scalar>
bool uses_box(const OracleProblem<Scalar>& problem, bool project_x) {
  return project_x && problem.x_box().has_value();
}

}  // namespace detail

/// g from an already observed local model (no extra queries).
template <typename Scalar>
StationarityReport<Scalar> stationarity_from_model(const OracleProblem<Scalar>& problem,
                                                   const LocalModel<Scalar>& model, const Vector<Scalar>& x,
                                                   const Vector<Scalar>& y, const MetricsOptions<Scalar>& opts) {
  detail::check_point(problem, x, y);
  if (!(opts.beta > Scalar(0))) throw InvalidParameterError("stationarity: beta must be > 0");

  const Vector<Scalar> grad_x = model.lagrangian_gradient(y);
  Vector<Scalar> g_x;
  if (detail::uses_box(problem, opts.project_x)) {
    const Scalar alpha = opts.alpha.value_or(Scalar(1));
    if (!(alpha > Scalar(0))) throw InvalidParameterError("stationarity: alpha must be > 0");
    g_x = (x - project_box(Vector<Scalar>(x - alpha * grad_x), *problem.x_box())) / alpha;
  } else {
    g_x = grad_x;
  }
  const Vector<Scalar> g_y =
      (y - project_dual(Vector<Scalar>(y + opts.beta * model.value.c), problem.y_upper())) / opts.beta;

  StationarityReport<Scalar> r;
  r.g_x_norm = g_x.norm();
  r.g_y_norm = g_y.norm();
  r.g_norm = std::sqrt(g_x.squaredNorm() + g_y.squaredNorm());
  r.M = r.g_norm;
  r.approximate = model.approximate;
  return r;
}

template <typename Scalar>
StationarityReport<Scalar> prox_grad_stationarity(OracleProblem<Scalar>& problem, const Vector<Scalar>& x,
                                                  const Vector<Scalar>& y, const MetricsOptions<Scalar>& opts) {
  detail::check_point(problem, x, y);
  const LocalModel<Scalar> model = observe_for_metrics(problem, x, opts.allow_approximate, opts.fd_radius);
  return stationarity_from_model(problem, model, x, y, opts);
}

template <typename Scalar>
StationarityReport<Scalar> prox_grad_stationarity(OracleProblem<Scalar>& problem, const Vector<Scalar>& x,
                                                  const Vector<Scalar>& y, Scalar beta) {
  MetricsOptions<Scalar> opts;
  opts.beta = beta;
  return prox_grad_stationarity(problem, x, y, opts);
}

/// Phi(x) = max_{0 <= y <= y_upper} f(x, y) = h(x) + sum_j y_upper_j max(c_j(x), 0).
template <typename Scalar>
Scalar phi_from_value(const Evaluation<Scalar>& e, const Vector<Scalar>& y_upper) {
  return e.h + y_upper.dot(e.c.cwiseMax(Scalar(0)));
}

/// Closed-form Phi on the clean channel; one metrics query.
template <typename Scalar>
Scalar phi_closed_form(OracleProblem<Scalar>& problem, const Vector<Scalar>& x) {
  return phi_from_value(problem.evaluate_clean(x, MetricsAccess::token()), problem.y_upper());
}

template <typename Scalar>
KKTReport<Scalar> kkt_from_model(const OracleProblem<Scalar>& problem, const LocalModel<Scalar>& model,
                                 const Vector<Scalar>& x, const Vector<Scalar>& y, bool project_x = true) {
  detail::check_point(problem, x, y);
  KKTReport<Scalar> r;
  const Vector<Scalar> grad = model.lagrangian_gradient(y);
  if (detail::uses_box(problem, project_x))
    r.grad_lagrangian_norm = (x - project_box(Vector<Scalar>(x - grad), *problem.x_box())).norm();
  else
    r.grad_lagrangian_norm = grad.norm();
  const Vector<Scalar>& c = model.value.c;
  r.max_violation = c.size() == 0 ? Scalar(0) : std::max(Scalar(0), c.maxCoeff());
  r.max_compl_slack = c.size() == 0 ? Scalar(0) : y.cwiseProduct(c).cwiseAbs().maxCoeff();
  r.dual_nonneg_ok = (y.array() >= Scalar(0)).all();
  r.dual_below_upper = (y.array() < problem.y_upper().array()).all();
  r.approximate = model.approximate;
  return r;
}

template <typename Scalar>
KKTReport<Scalar> kkt_residuals(OracleProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y,
                                bool project_x = true, bool allow_approximate = false) {
  detail::check_point(problem, x, y);
  return kkt_from_model(problem, observe_for_metrics(problem, x, allow_approximate), x, y, project_x);
}

/// (h_val - h_star) / h_star.
template <typename Scalar>
Scalar relative_error(Scalar h_val, Scalar h_star) {
  if (h_star == Scalar(0)) throw DivisionDomainError("relative_error: h_star must be nonzero");
  return (h_val - h_star) / h_star;
}

}  // namespace zob
