#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zob/algorithms/projection.hpp"
#include "zob/estimators/estimators.hpp"
#include "zob/estimators/radius_schedule.hpp"
#include "zob/metrics/metrics.hpp"
#include "zob/metrics/moreau.hpp"

namespace zob {

enum class Algorithm { kZobGda, kZobSgda, kRgeGda };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kZobGda:
      return "zob_gda";
    case Algorithm::kZobSgda:
      return "zob_sgda";
    case Algorithm::kRgeGda:
      return "rge_gda";
  }
  return "unknown";
}

inline Algorithm algorithm_from_string(std::string_view s) {
  if (s == "zob_gda") return Algorithm::kZobGda;
  if (s == "zob_sgda") return Algorithm::kZobSgda;
  if (s == "rge_gda") return Algorithm::kRgeGda;
  throw InvalidParameterError("unknown algorithm '" + std::string(s) + "' (expected zob_gda, zob_sgda, rge_gda)");
}

inline bool is_block_algorithm(Algorithm a) { return a != Algorithm::kRgeGda; }

/// Solver state. z is present only for ZOB-SGDA.
template <typename Scalar>
struct Iterate {
  Vector<Scalar> x;
  Vector<Scalar> y;
  std::optional<Vector<Scalar>> z;
  std::int64_t k = 0;
};

template <typename Scalar>
struct SolverConfig {
  Algorithm algorithm = Algorithm::kZobGda;
  Scalar alpha = Scalar(0.01);
  Scalar beta = Scalar(0.01);
  /// Anchor averaging weight, ZOB-SGDA only.
  Scalar gamma = Scalar(1);
  /// Proximal weight of the smoothed Lagrangian, ZOB-SGDA only.
  Scalar p = Scalar(0);
  Index block_size = 1;
  std::int64_t max_iters = 0;
  RadiusSchedule<Scalar> radius = RadiusSchedule<Scalar>::auto_rescaled(Scalar(0.1), Scalar(1.2), Scalar(2e-4), 1, 0);
  std::uint64_t seed = 0;
  /// Project x onto the problem's box after each primal step.
  bool project_x = false;
  DirectionLaw direction = DirectionLaw::kGaussian;
  std::optional<Vector<Scalar>> x0;
  std::optional<Vector<Scalar>> y0;

  // Trace settings.
  bool record_metrics = true;
  bool allow_approximate_metrics = false;
  /// Moreau metric every `metrics_stride` iterations and at the last one, when
  /// a smoothness estimate is supplied.
  int metrics_stride = 10;
  std::optional<Scalar> moreau_lipschitz;
  std::optional<Scalar> h_star;
  bool keep_iterates = false;
};

/// Queries one solver iteration costs: b + 1 for block solvers, 2 for RGE-GDA.
template <typename Scalar>
std::int64_t queries_per_step(const SolverConfig<Scalar>& cfg) {
  return is_block_algorithm(cfg.algorithm) ? static_cast<std::int64_t>(cfg.block_size) + 1 : 2;
}

template <typename Scalar>
void validate_config(const OracleProblem<Scalar>& problem, const SolverConfig<Scalar>& cfg) {
  auto finite = [](Scalar v) { return std::isfinite(static_cast<double>(v)); };
  if (!(cfg.alpha >= Scalar(0)) || !finite(cfg.alpha)) throw InvalidParameterError("alpha must be finite and >= 0");
  if (!(cfg.beta > Scalar(0)) || !finite(cfg.beta)) throw InvalidParameterError("beta must be finite and > 0");
  if (cfg.max_iters < 0) throw InvalidParameterError("max_iters must be >= 0");
  if (cfg.algorithm == Algorithm::kZobSgda) {
    if (!(cfg.gamma > Scalar(0) && cfg.gamma <= Scalar(1))) throw InvalidParameterError("gamma must lie in (0, 1]");
    if (!(cfg.p >= Scalar(0)) || !finite(cfg.p)) throw InvalidParameterError("p must be finite and >= 0");
  }
  if (is_block_algorithm(cfg.algorithm)) {
    validate_block_size(problem.dim_x(), cfg.block_size);
    if (cfg.radius.block_size() != cfg.block_size) {
      std::ostringstream os;
      os << "radius schedule was built for b = " << cfg.radius.block_size() << " but the solver uses b = "
         << cfg.block_size;
      throw InvalidRadiusError(os.str());
    }
  }
  if (cfg.radius.horizon() < cfg.max_iters) {
    std::ostringstream os;
    os << "radius schedule horizon " << cfg.radius.horizon() << " is shorter than K = " << cfg.max_iters
       << "; the condition sum_{k<=K} r_k^2 <= 1/b is only certified up to the horizon";
    throw InvalidRadiusError(os.str());
  }
  if (cfg.project_x && !problem.x_box()) throw InvalidParameterError("project_x requires a problem with an x box");
  if (cfg.x0 && cfg.x0->size() != problem.dim_x()) throw DimensionError("x0 length must equal dim_x");
  if (cfg.y0) {
    if (cfg.y0->size() != problem.dim_y()) throw DimensionError("y0 length must equal dim_y");
    if ((cfg.y0->array() < Scalar(0)).any() || (cfg.y0->array() > problem.y_upper().array()).any())
      throw InvalidParameterError("y0 must lie in [0, y_upper]");
  }
  if (cfg.metrics_stride < 1) throw InvalidParameterError("metrics_stride must be >= 1");
}

/// (x0, y0, z0 = x0) with defaults: the box midpoint (or 0) and y = 0.
template <typename Scalar>
Iterate<Scalar> initial_iterate(const OracleProblem<Scalar>& problem, const SolverConfig<Scalar>& cfg) {
  Iterate<Scalar> it;
  if (cfg.x0)
    it.x = *cfg.x0;
  else if (problem.x_box())
    it.x = problem.x_box()->midpoint();
  else
    it.x = Vector<Scalar>::Zero(problem.dim_x());
  if (cfg.project_x) it.x = project_box(it.x, *problem.x_box());
  it.y = cfg.y0 ? *cfg.y0 : Vector<Scalar>::Zero(problem.dim_y());
  if (cfg.algorithm == Algorithm::kZobSgda) it.z = it.x;
  return it;
}

namespace detail {

template <typename Scalar>
Vector<Scalar> primal_update(const OracleProblem<Scalar>& problem, const SolverConfig<Scalar>& cfg,
                             const Vector<Scalar>& x, const Vector<Scalar>& grad) {
  Vector<Scalar> next = x - cfg.alpha * grad;
  if (cfg.project_x) next = project_box(next, *problem.x_box());
  return next;
}

/// y_{k+1} = P_Y[y_k + beta c(x_k)] with the constraint values observed at x_k.
template <typename Scalar>
Vector<Scalar> dual_update(const OracleProblem<Scalar>& problem, const SolverConfig<Scalar>& cfg,
                           const Vector<Scalar>& y, const Vector<Scalar>& c_at_xk) {
  return project_dual(Vector<Scalar>(y + cfg.beta * c_at_xk), problem.y_upper());
}

}  // namespace detail

/// One ZOB-GDA iteration; exactly b + 1 queries.
template <typename Scalar>
Iterate<Scalar> zobgda_step(const Iterate<Scalar>& state, OracleProblem<Scalar>& problem,
                            const SolverConfig<Scalar>& cfg, RandomStream& rng, BlockSample* used_block = nullptr) {
  const BlockSample block = sample_block(problem.dim_x(), cfg.block_size, rng);
  const GradientEstimate<Scalar> est = bcge(problem, state.x, state.y, cfg.radius(state.k), block);
  Iterate<Scalar> next;
  next.x = detail::primal_update(problem, cfg, state.x, est.grad);
  next.y = detail::dual_update(problem, cfg, state.y, est.base.c);
  next.k = state.k + 1;
  if (used_block) *used_block = block;
  return next;
}

/// One ZOB-SGDA iteration; exactly b + 1 queries. The dual gradient of the
/// smoothed function equals c(x_k) because the proximal term is y-free.
template <typename Scalar>
Iterate<Scalar> zobsgda_step(const Iterate<Scalar>& state, OracleProblem<Scalar>& problem,
                             const SolverConfig<Scalar>& cfg, RandomStream& rng, BlockSample* used_block = nullptr) {
  if (!state.z) throw InvalidParameterError("zobsgda_step: iterate carries no anchor z");
  const BlockSample block = sample_block(problem.dim_x(), cfg.block_size, rng);
  const GradientEstimate<Scalar> est =
      smoothed_bcge(problem, state.x, state.y, *state.z, cfg.p, cfg.radius(state.k), block);
  Iterate<Scalar> next;
  next.x = detail::primal_update(problem, cfg, state.x, est.grad);
  next.y = detail::dual_update(problem, cfg, state.y, est.base.c);
  next.z = cfg.gamma * next.x + (Scalar(1) - cfg.gamma) * *state.z;
  next.k = state.k + 1;
  if (used_block) *used_block = block;
  return next;
}

/// Baseline GDA with the two-point random estimator; 2 queries.
template <typename Scalar>
Iterate<Scalar> rge_gda_step(const Iterate<Scalar>& state, OracleProblem<Scalar>& problem,
                             const SolverConfig<Scalar>& cfg, RandomStream& rng) {
  const Vector<Scalar> dir = sample_direction<Scalar>(problem.dim_x(), cfg.direction, rng);
  const GradientEstimate<Scalar> est = rge(problem, state.x, state.y, cfg.radius(state.k), dir);
  Iterate<Scalar> next;
  next.x = detail::primal_update(problem, cfg, state.x, est.grad);
  next.y = detail::dual_update(problem, cfg, state.y, est.base.c);
  next.k = state.k + 1;
  return next;
}

template <typename Scalar>
Iterate<Scalar> solver_step(const Iterate<Scalar>& state, OracleProblem<Scalar>& problem,
                            const SolverConfig<Scalar>& cfg, RandomStream& rng) {
  switch (cfg.algorithm) {
    case Algorithm::kZobGda:
      return zobgda_step(state, problem, cfg, rng);
    case Algorithm::kZobSgda:
      return zobsgda_step(state, problem, cfg, rng);
    case Algorithm::kRgeGda:
      return rge_gda_step(state, problem, cfg, rng);
  }
  throw InvalidParameterError("unknown algorithm");
}

/// One row of a run trace; metrics are evaluated on the clean channel.
struct TraceRecord {
  std::int64_t k = 0;
  std::int64_t queries = 0;
  double h = 0;
  double violation = 0;
  std::optional<double> g_norm;
  std::optional<double> moreau_norm;
  std::optional<double> rel_error;
};

template <typename Scalar>
struct RunTrace {
  std::vector<TraceRecord> records;
  std::vector<Iterate<Scalar>> iterates;
  Iterate<Scalar> final_iterate;
  std::vector<std::int64_t> per_iteration_queries;
  std::int64_t total_queries = 0;
  std::int64_t metrics_queries = 0;
  std::uint64_t config_fingerprint = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::kZobGda;
  Index block_size = 0;
};

/// FNV-1a over a canonical rendering of everything in the config except the seed.
template <typename Scalar>
std::uint64_t config_fingerprint(const OracleProblem<Scalar>& problem, const SolverConfig<Scalar>& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << problem.name() << '|' << problem.dim_x() << '|' << problem.dim_y() << '|' << to_string(cfg.algorithm) << '|'
     << cfg.alpha << '|' << cfg.beta << '|' << cfg.gamma << '|' << cfg.p << '|' << cfg.block_size << '|'
     << cfg.max_iters << '|' << cfg.radius.r0() << '|' << cfg.radius.decay() << '|' << cfg.radius.cap() << '|'
     << cfg.radius.horizon() << '|' << cfg.project_x << '|' << static_cast<int>(cfg.direction);
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : os.str()) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

struct RunCallbacks {
  std::function<void(const TraceRecord&)> on_record;
};

/// Executes K iterations and records the initial point plus one row per step.
/// Resets the problem's query counters; solver and metrics queries are kept
/// apart, and total solver queries equal K (b + 1) or 2K.
template <typename Scalar>
RunTrace<Scalar> run(OracleProblem<Scalar>& problem, const SolverConfig<Scalar>& cfg, const RunCallbacks& callbacks = {}) {
  validate_config(problem, cfg);
  problem.queries().reset();
  problem.metrics_queries().reset();

  RunTrace<Scalar> trace;
  trace.seed = cfg.seed;
  trace.algorithm = cfg.algorithm;
  trace.block_size = is_block_algorithm(cfg.algorithm) ? cfg.block_size : 0;
  trace.config_fingerprint = config_fingerprint(problem, cfg);

  MetricsOptions<Scalar> mopts;
  mopts.beta = cfg.beta;
  mopts.alpha = cfg.alpha > Scalar(0) ? std::optional<Scalar>(cfg.alpha) : std::nullopt;
  mopts.project_x = cfg.project_x;
  mopts.allow_approximate = cfg.allow_approximate_metrics;
  const bool gradients_available = problem.has_true_gradients() || cfg.allow_approximate_metrics;

  auto record = [&](const Iterate<Scalar>& it) {
    TraceRecord rec;
    rec.k = it.k;
    rec.queries = problem.queries().total();
    if (cfg.record_metrics) {
      if (gradients_available) {
        const LocalModel<Scalar> model =
            observe_for_metrics(problem, it.x, cfg.allow_approximate_metrics, mopts.fd_radius);
        rec.h = static_cast<double>(model.value.h);
        rec.violation = model.value.c.size() ? static_cast<double>(model.value.c.maxCoeff()) : 0.0;
        rec.g_norm = static_cast<double>(stationarity_from_model(problem, model, it.x, it.y, mopts).g_norm);
      } else {
        const Evaluation<Scalar> e = problem.evaluate_clean(it.x, MetricsAccess::token());
        rec.h = static_cast<double>(e.h);
        rec.violation = e.c.size() ? static_cast<double>(e.c.maxCoeff()) : 0.0;
      }
      if (cfg.h_star) rec.rel_error = static_cast<double>(relative_error(Scalar(rec.h), *cfg.h_star));
      const bool moreau_due = it.k % cfg.metrics_stride == 0 || it.k == cfg.max_iters;
      if (cfg.moreau_lipschitz && gradients_available && moreau_due) {
        MoreauOptions<Scalar> o;
        o.project_x = cfg.project_x;
        o.allow_approximate = cfg.allow_approximate_metrics;
        try {
          rec.moreau_norm = static_cast<double>(moreau_gradient(problem, it.x, *cfg.moreau_lipschitz, o).norm);
        } catch (const ConvergenceError&) {
          // unavailable for this k
        }
      }
    }
    if (cfg.keep_iterates) trace.iterates.push_back(it);
    if (callbacks.on_record) callbacks.on_record(rec);
    trace.records.push_back(std::move(rec));
  };

  RandomStream rng(cfg.seed, StreamId::kBlocks);
  Iterate<Scalar> state = initial_iterate(problem, cfg);
  record(state);
  for (std::int64_t k = 0; k < cfg.max_iters; ++k) {
    try {
      state = solver_step(state, problem, cfg, rng);
    } catch (const Error& e) {
      throw SolverError(std::string("iteration ") + std::to_string(k) + ": " + e.what(), k);
    }
    problem.queries().close_iteration();
    record(state);
  }

  trace.final_iterate = state;
  trace.per_iteration_queries = problem.queries().per_iteration_log();
  trace.total_queries = problem.queries().total();
  trace.metrics_queries = problem.metrics_queries().total();
  return trace;
}

}  // namespace zob
