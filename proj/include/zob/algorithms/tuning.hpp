#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "zob/algorithms/solver.hpp"

namespace zob {

/// Step sizes prescribed by the convergence theory for a smoothness estimate L.
///
/// ZOB-GDA: alpha = min(1/L, (N/K)^{2/3}), beta = min(1/L, 100 alpha).
/// ZOB-SGDA: p = 3L, alpha = 1/(p + 10L + 1),
///   beta = min{1/(12L), alpha^2 (p-L)^2 / (4L (sqrt(N) + alpha (p-L))^2)},
///   gamma = min{1/sqrt(KN), 1/36, 1/(768 p beta)}.
/// RGE-GDA uses the ZOB-GDA formulas with N = d.
/// N = d/b is used as a real number.
template <typename Scalar = double>
SolverConfig<Scalar> schedule_defaults(Scalar L, std::int64_t K, Index b, Index d, Algorithm algorithm) {
  if (!(L > Scalar(0)) || !std::isfinite(static_cast<double>(L)))
    throw InvalidParameterError("schedule_defaults: L must be finite and > 0");
  if (K < 0) throw InvalidParameterError("schedule_defaults: K must be >= 0");
  validate_block_size(d, b);

  SolverConfig<Scalar> cfg;
  cfg.algorithm = algorithm;
  cfg.block_size = b;
  cfg.max_iters = K;
  const Scalar N = algorithm == Algorithm::kRgeGda ? Scalar(d) : Scalar(d) / Scalar(b);
  const Scalar inf = std::numeric_limits<Scalar>::infinity();

  if (algorithm == Algorithm::kZobSgda) {
    cfg.p = Scalar(3) * L;
    cfg.alpha = Scalar(1) / (cfg.p + Scalar(10) * L + Scalar(1));
    const Scalar gap = cfg.alpha * (cfg.p - L);
    const Scalar denom = std::sqrt(N) + gap;
    cfg.beta = std::min(Scalar(1) / (Scalar(12) * L), gap * gap / (Scalar(4) * L * denom * denom));
    const Scalar kn = Scalar(K) * N;
    const Scalar first = kn > Scalar(0) ? Scalar(1) / std::sqrt(kn) : inf;
    cfg.gamma = std::min({first, Scalar(1) / Scalar(36), Scalar(1) / (Scalar(768) * cfg.p * cfg.beta)});
  } else {
    const Scalar ratio = K > 0 ? std::pow(N / Scalar(K), Scalar(2) / Scalar(3)) : inf;
    cfg.alpha = std::min(Scalar(1) / L, ratio);
    cfg.beta = std::min(Scalar(1) / L, Scalar(100) * cfg.alpha);
  }
  const Index radius_b = is_block_algorithm(algorithm) ? b : 1;
  cfg.block_size = radius_b;
  cfg.radius = RadiusSchedule<Scalar>::auto_rescaled(Scalar(0.1), Scalar(1.2), Scalar(2e-4), radius_b, K);
  return cfg;
}

template <typename Scalar>
struct LipschitzProbeOptions {
  int points = 20;
  Scalar delta = Scalar(1e-3);
  Scalar fd_radius = Scalar(1e-6);
  std::uint64_t seed = 0;
};

template <typename Scalar>
struct LipschitzEstimate {
  Scalar L{};
  /// Oracle queries spent, charged to the metrics budget.
  std::int64_t queries = 0;
};

/// Estimates the smoothness of f(., y_upper) by max ||G(x + delta u) - G(x)|| / delta
/// over seeded points and unit directions, where G is a full coordinate
/// estimate, and combines it with the largest constraint Jacobian norm seen
/// (the x-y cross term). Works on a clone; the caller's counters are untouched.
template <typename Scalar>
LipschitzEstimate<Scalar> probe_lipschitz(const OracleProblem<Scalar>& problem,
                                          const LipschitzProbeOptions<Scalar>& opts = {}) {
  if (opts.points < 1) throw InvalidParameterError("probe_lipschitz: points must be >= 1");
  OracleProblem<Scalar> local = problem.clone();
  RandomStream rng(opts.seed, StreamId::kProbe);
  const Index d = local.dim_x();
  const Vector<Scalar> y = local.y_upper();

  auto local_gradient = [&](const Vector<Scalar>& at, Matrix<Scalar>& jac) {
    const Evaluation<Scalar> base = local.evaluate(at);
    Vector<Scalar> g(d);
    jac.resize(local.dim_y(), d);
    Vector<Scalar> probe = at;
    for (Index i = 0; i < d; ++i) {
      probe(i) = at(i) + opts.fd_radius;
      const Evaluation<Scalar> e = local.evaluate(probe);
      g(i) = (lagrangian(e, y) - lagrangian(base, y)) / opts.fd_radius;
      jac.col(i) = (e.c - base.c) / opts.fd_radius;
      probe(i) = at(i);
    }
    return g;
  };

  Scalar best(0);
  for (int n = 0; n < opts.points; ++n) {
    Vector<Scalar> x(d);
    if (local.x_box()) {
      for (Index i = 0; i < d; ++i) x(i) = rng.uniform(local.x_box()->lower(i), local.x_box()->upper(i));
    } else {
      x = rng.gaussian_vector<Scalar>(d);
    }
    Vector<Scalar> u = rng.gaussian_vector<Scalar>(d);
    u /= u.norm();
    Matrix<Scalar> jac0, jac1;
    const Vector<Scalar> g0 = local_gradient(x, jac0);
    const Vector<Scalar> g1 = local_gradient(Vector<Scalar>(x + opts.delta * u), jac1);
    best = std::max(best, (g1 - g0).norm() / opts.delta);
    if (jac0.size() > 0) {
      Eigen::JacobiSVD<Matrix<Scalar>> svd(jac0);
      best = std::max(best, svd.singularValues()(0));
    }
  }
  return LipschitzEstimate<Scalar>{best, local.queries().total()};
}

template <typename Scalar>
struct HStarOptions {
  /// Long full-coordinate ZOB-SGDA warm start.
  std::int64_t zo_iters = 20000;
  Scalar alpha = Scalar(0.01);
  Scalar beta = Scalar(0.01);
  Scalar gamma = Scalar(0.3);
  Scalar p = Scalar(1);
  std::uint64_t seed = 0;
  std::optional<Vector<Scalar>> x0;
  /// Augmented-Lagrangian polish with analytic gradients.
  Scalar rho = Scalar(10);
  int outer_iters = 200;
  int inner_iters = 20000;
  Scalar tolerance = Scalar(1e-10);
};

template <typename Scalar>
struct HStarResult {
  Scalar h_star{};
  Vector<Scalar> x;
  Vector<Scalar> y;
  KKTReport<Scalar> kkt;
  std::int64_t solver_queries = 0;
  std::int64_t metrics_queries = 0;
};

/// Reference optimum for relative-error reporting: a long ZOB-SGDA run with
/// b = d, then an augmented-Lagrangian polish (projected gradient inner
/// solves, multiplier clamp to [0, y_upper]) using analytic gradients.
template <typename Scalar>
HStarResult<Scalar> compute_h_star(const OracleProblem<Scalar>& problem, const HStarOptions<Scalar>& opts = {}) {
  OracleProblem<Scalar> local = problem.clone();
  const Index d = local.dim_x();
  const bool boxed = local.x_box().has_value();

  SolverConfig<Scalar> cfg;
  cfg.algorithm = Algorithm::kZobSgda;
  cfg.block_size = d;
  cfg.alpha = opts.alpha;
  cfg.beta = opts.beta;
  cfg.gamma = opts.gamma;
  cfg.p = opts.p;
  cfg.max_iters = opts.zo_iters;
  cfg.radius = RadiusSchedule<Scalar>::auto_rescaled(Scalar(0.1), Scalar(1.2), Scalar(2e-4), d, opts.zo_iters);
  cfg.seed = opts.seed;
  cfg.project_x = boxed;
  cfg.x0 = opts.x0;
  cfg.record_metrics = false;
  const RunTrace<Scalar> warm = run(local, cfg);
  const std::int64_t solver_queries = local.queries().total();

  const Vector<Scalar>& y_upper = local.y_upper();
  auto project = [&](Vector<Scalar> v) { return boxed ? project_box(v, *local.x_box()) : v; };
  const MetricsToken token = MetricsAccess::token();
  auto shifted = [&](const Evaluation<Scalar>& e, const Vector<Scalar>& y) {
    return Vector<Scalar>((y + opts.rho * e.c).cwiseMax(Scalar(0)));
  };
  auto aug_value = [&](const Evaluation<Scalar>& e, const Vector<Scalar>& y) {
    return e.h + (shifted(e, y).squaredNorm() - y.squaredNorm()) / (Scalar(2) * opts.rho);
  };

  Vector<Scalar> x = project(warm.final_iterate.x);
  Vector<Scalar> y = warm.final_iterate.y;
  Scalar step(1);
  KKTReport<Scalar> kkt;
  for (int outer = 0; outer < opts.outer_iters; ++outer) {
    LocalModel<Scalar> m = observe_for_metrics(local, x);
    for (int it = 0; it < opts.inner_iters; ++it) {
      const Vector<Scalar> grad = m.lagrangian_gradient(shifted(m.value, y));
      const Scalar res = (x - project(x - grad)).norm();
      if (res <= opts.tolerance) break;
      const Scalar f0 = aug_value(m.value, y);
      for (int bt = 0;; ++bt) {
        const Vector<Scalar> cand = project(x - step * grad);
        const Vector<Scalar> delta = cand - x;
        const Scalar f1 = aug_value(local.evaluate_clean(cand, token), y);
        if (f1 <= f0 + grad.dot(delta) + delta.squaredNorm() / (Scalar(2) * step) + detail::roundoff(f0) || bt >= 60) {
          x = cand;
          step *= Scalar(1.5);
          break;
        }
        step *= Scalar(0.5);
      }
      m = observe_for_metrics(local, x);
    }
    y = project_dual(shifted(m.value, y), y_upper);
    kkt = kkt_residuals(local, x, y, boxed);
    if (kkt.passes(opts.tolerance)) break;
  }

  HStarResult<Scalar> out;
  out.x = x;
  out.y = y;
  out.kkt = kkt;
  out.h_star = local.evaluate_clean(x, token).h;
  out.solver_queries = solver_queries;
  out.metrics_queries = local.metrics_queries().total();
  return out;
}

}  // namespace zob
