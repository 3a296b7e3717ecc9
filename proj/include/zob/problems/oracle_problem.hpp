#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zob/types.hpp"

namespace zob {

/// One simultaneous observation of the objective and all constraints.
template <typename Scalar>
struct Evaluation {
  Scalar h{};
  Vector<Scalar> c;
};

/// Analytic derivatives; jac_c is d_y x d_x.
template <typename Scalar>
struct TrueGradients {
  Vector<Scalar> grad_h;
  Matrix<Scalar> jac_c;
};

/// Counts oracle queries. `close_iteration` appends the queries made since the
/// previous close, so after a run total() == sum(per_iteration_log()).
class QueryCounter {
 public:
  void increment(std::int64_t n = 1) { total_ += n; }
  std::int64_t total() const { return total_; }
  std::int64_t since_mark() const { return total_ - mark_; }
  const std::vector<std::int64_t>& per_iteration_log() const { return log_; }

  void close_iteration() {
    log_.push_back(total_ - mark_);
    mark_ = total_;
  }

  void reset() {
    total_ = 0;
    mark_ = 0;
    log_.clear();
  }

 private:
  std::int64_t total_ = 0;
  std::int64_t mark_ = 0;
  std::vector<std::int64_t> log_;
};

struct MetricsAccess;

/// Passkey for the metrics-only surface of OracleProblem (true gradients and
/// noise-free evaluation). Only MetricsAccess can mint one.
class MetricsToken {
  MetricsToken() = default;
  friend struct MetricsAccess;
};

struct MetricsAccess {
  static MetricsToken token() { return MetricsToken{}; }
};

/// Black-box constrained problem: min h(x) s.t. c(x) <= 0, with dual box
/// 0 <= y <= y_upper and an optional decomposable box on x.
///
/// Immutable after construction except for its two query counters. `clone()`
/// copies the problem with fresh counters for use in an independent run.
template <typename Scalar>
class OracleProblem {
 public:
  using VectorType = Vector<Scalar>;
  using EvalFn = std::function<Evaluation<Scalar>(const VectorType&)>;
  using GradFn = std::function<TrueGradients<Scalar>(const VectorType&)>;

  OracleProblem(Index dim_x, VectorType y_upper, EvalFn eval, std::optional<Box<Scalar>> x_box = {},
                GradFn true_grads = {}, std::string name = "custom")
      : dim_x_(dim_x),
        y_upper_(std::move(y_upper)),
        x_box_(std::move(x_box)),
        observed_(eval),
        clean_(std::move(eval)),
        grads_(std::move(true_grads)),
        name_(std::move(name)) {
    if (dim_x_ < 1) throw DimensionError("OracleProblem: dim_x must be >= 1");
    if (!observed_) throw InvalidSpecError("OracleProblem: eval function is empty");
    if (!y_upper_.allFinite() || (y_upper_.array() <= Scalar(0)).any())
      throw InvalidSpecError("OracleProblem: y_upper entries must be finite and > 0");
    if (x_box_) {
      if (x_box_->lower.size() != dim_x_ || x_box_->upper.size() != dim_x_)
        throw DimensionError("OracleProblem: x_box size does not match dim_x");
      if (!(x_box_->lower.array() < x_box_->upper.array()).all())
        throw InvalidSpecError("OracleProblem: x_box requires lower < upper componentwise");
    }
  }

  Index dim_x() const { return dim_x_; }
  Index dim_y() const { return y_upper_.size(); }
  const VectorType& y_upper() const { return y_upper_; }
  const std::optional<Box<Scalar>>& x_box() const { return x_box_; }
  const std::string& name() const { return name_; }
  bool has_true_gradients() const { return static_cast<bool>(grads_); }

  /// Observed (possibly noisy) h(x) and c(x); exactly one query.
  Evaluation<Scalar> evaluate(const VectorType& x) {
    check_input(x);
    queries_.increment();
    return checked_call(observed_, x);
  }

  /// Noise-free evaluation charged to the metrics budget.
  Evaluation<Scalar> evaluate_clean(const VectorType& x, MetricsToken) {
    check_input(x);
    metrics_queries_.increment();
    return checked_call(clean_, x);
  }

  TrueGradients<Scalar> true_gradients(const VectorType& x, MetricsToken) const {
    if (!grads_) throw UnsupportedMetricError("problem '" + name_ + "' exposes no true gradients");
    check_input(x);
    return grads_(x);
  }

  QueryCounter& queries() { return queries_; }
  const QueryCounter& queries() const { return queries_; }
  QueryCounter& metrics_queries() { return metrics_queries_; }
  const QueryCounter& metrics_queries() const { return metrics_queries_; }

  OracleProblem clone() const {
    OracleProblem copy = *this;
    copy.queries_.reset();
    copy.metrics_queries_.reset();
    return copy;
  }

  /// Replaces the observed channel, keeping the clean one. Used by noise wrappers.
  OracleProblem with_observed(EvalFn observed, std::string name) const {
    OracleProblem copy = clone();
    copy.observed_ = std::move(observed);
    copy.name_ = std::move(name);
    return copy;
  }

  /// Observed channel without counting; for wrappers composing problems.
  const EvalFn& observed_fn() const { return observed_; }

 private:
  void check_input(const VectorType& x) const {
    if (x.size() != dim_x_) {
      std::ostringstream os;
      os << "evaluate: expected x of length " << dim_x_ << ", got " << x.size();
      throw DimensionError(os.str());
    }
    if (!x.allFinite()) throw InputDomainError("evaluate: x has non-finite entries");
  }

  Evaluation<Scalar> checked_call(const EvalFn& fn, const VectorType& x) const {
    Evaluation<Scalar> out = fn(x);
    if (out.c.size() != dim_y())
      throw OracleFailure("oracle returned constraint vector of wrong length", to_std(x));
    if (!std::isfinite(static_cast<double>(out.h)) || !out.c.allFinite())
      throw OracleFailure("oracle returned a non-finite value", to_std(x));
    return out;
  }

  Index dim_x_;
  VectorType y_upper_;
  std::optional<Box<Scalar>> x_box_;
  EvalFn observed_;
  EvalFn clean_;
  GradFn grads_;
  std::string name_;
  QueryCounter queries_;
  QueryCounter metrics_queries_;
};

/// f(x, y) = h(x) + y^T c(x) assembled from one observation.
template <typename Scalar>
Scalar lagrangian(const Evaluation<Scalar>& e, const Vector<Scalar>& y) {
  return y.size() == 0 ? e.h : e.h + y.dot(e.c);
}

/// Free-function form of OracleProblem::evaluate.
template <typename Scalar>
Evaluation<Scalar> evaluate(OracleProblem<Scalar>& problem, const Vector<Scalar>& x) {
  return problem.evaluate(x);
}

}  // namespace zob
