#pragma once

#include <functional>

#include "zob/zob.hpp"

namespace zob::test {

using Vec = Vector<double>;
using Mat = Matrix<double>;

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double e : v) out(i++) = e;
  return out;
}

/// Problem from plain lambdas h(x) and c(x), with optional analytic gradients.
inline OracleProblem<double> make_problem(Index d, Vec y_upper, std::function<double(const Vec&)> h,
                                          std::function<Vec(const Vec&)> c,
                                          std::function<Vec(const Vec&)> grad_h = {},
                                          std::function<Mat(const Vec&)> jac_c = {},
                                          std::optional<Box<double>> box = std::nullopt) {
  auto eval = [h, c](const Vec& x) { return Evaluation<double>{h(x), c(x)}; };
  OracleProblem<double>::GradFn grads;
  if (grad_h) grads = [grad_h, jac_c](const Vec& x) { return TrueGradients<double>{grad_h(x), jac_c(x)}; };
  return OracleProblem<double>(d, std::move(y_upper), eval, std::move(box), grads, "fixture");
}

/// Unconstrained problem (d_y = 0).
inline OracleProblem<double> make_unconstrained(Index d, std::function<double(const Vec&)> h) {
  return make_problem(d, Vec(0), std::move(h), [](const Vec&) { return Vec(0); });
}

/// Random quadratic 0.5 x^T A x + b^T x with A = B^T B / d + mu I.
struct Quadratic {
  Mat A;
  Vec b;
  double L;
  OracleProblem<double> problem;
};

inline Quadratic make_quadratic(Index d, std::uint64_t seed, double scale = 1.0) {
  RandomStream rng(seed, StreamId::kFixture);
  Mat B(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) B(i, j) = rng.gaussian<double>();
  Mat A = scale * (B.transpose() * B / double(d) + 0.1 * Mat::Identity(d, d));
  Vec b = rng.gaussian_vector<double>(d);
  Eigen::SelfAdjointEigenSolver<Mat> eig(A);
  const double L = eig.eigenvalues().cwiseAbs().maxCoeff();
  auto problem = make_unconstrained(d, [A, b](const Vec& x) { return 0.5 * x.dot(A * x) + b.dot(x); });
  return Quadratic{A, b, L, std::move(problem)};
}

}  // namespace zob::test
