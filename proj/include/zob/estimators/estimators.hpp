#pragma once

#include <cmath>
#include <string>

#include "zob/estimators/block_sample.hpp"
#include "zob/problems/oracle_problem.hpp"
#include "zob/random.hpp"

namespace zob {

/// Gradient estimate of f(., y) plus the base observation at x. The cached
/// constraint values base.c are what the dual step consumes.
template <typename Scalar>
struct GradientEstimate {
  Vector<Scalar> grad;
  Evaluation<Scalar> base;
  Scalar f_base{};
};

enum class DirectionLaw { kGaussian, kSphere };

namespace detail {

template <typename Scalar>
void check_radius(Scalar r) {
  if (!(r > Scalar(0)) || !std::isfinite(static_cast<double>(r)))
    throw InvalidRadiusError("smoothing radius must be finite and > 0");
}

template <typename Scalar>
void check_dual(const OracleProblem<Scalar>& problem, const Vector<Scalar>& y) {
  if (y.size() != problem.dim_y()) throw DimensionError("dual vector length must equal dim_y");
}

}  // namespace detail

/// Random perturbation direction: standard Gaussian, or uniform on the sphere
/// of radius sqrt(d).
template <typename Scalar>
Vector<Scalar> sample_direction(Index d, DirectionLaw law, RandomStream& rng) {
  Vector<Scalar> z = rng.gaussian_vector<Scalar>(d);
  if (law == DirectionLaw::kSphere) {
    const Scalar n = z.norm();
    if (n > Scalar(0)) z *= std::sqrt(Scalar(d)) / n;
  }
  return z;
}

/// Two-point random gradient estimate ((f(x + r z, y) - f(x, y)) / r) z.
/// Two queries.
template <typename Scalar>
GradientEstimate<Scalar> rge(OracleProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y,
                             Scalar r, const Vector<Scalar>& direction) {
  detail::check_radius(r);
  detail::check_dual(problem, y);
  if (direction.size() != problem.dim_x()) throw DimensionError("rge: direction length must equal dim_x");

  GradientEstimate<Scalar> out;
  out.base = problem.evaluate(x);
  out.f_base = lagrangian(out.base, y);
  const Vector<Scalar> shifted = x + r * direction;
  const Scalar f_shift = lagrangian(problem.evaluate(shifted), y);
  out.grad = ((f_shift - out.f_base) / r) * direction;
  return out;
}

/// Block coordinate-wise estimate: forward differences on the block
/// coordinates, exact zeros elsewhere. One shared base query plus one per
/// coordinate (b + 1 in total).
template <typename Scalar>
GradientEstimate<Scalar> bcge(OracleProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y,
                              Scalar r, const BlockSample& block) {
  detail::check_radius(r);
  detail::check_dual(problem, y);
  const Index d = problem.dim_x();
  if (block.size() < 1 || block.size() > d || block.indices.front() < 0 || block.indices.back() >= d)
    throw InvalidBlockError("bcge: block indices must lie in [0, d_x)");

  GradientEstimate<Scalar> out;
  out.base = problem.evaluate(x);
  out.f_base = lagrangian(out.base, y);
  out.grad = Vector<Scalar>::Zero(d);

  Vector<Scalar> probe = x;
  for (Index i : block) {
    probe(i) = x(i) + r;
    const Scalar f_i = lagrangian(problem.evaluate(probe), y);
    out.grad(i) = (f_i - out.f_base) / r;
    probe(i) = x(i);
  }
  return out;
}

/// Full coordinate-wise estimate; d_x + 1 queries.
template <typename Scalar>
GradientEstimate<Scalar> cge_full(OracleProblem<Scalar>& problem, const Vector<Scalar>& x, const Vector<Scalar>& y,
                                  Scalar r) {
  return bcge(problem, x, y, r, BlockSample::full(problem.dim_x()));
}

/// bcge of the smoothed function f(x, y) + p/2 ||x - z||^2: the proximal
/// term p (x - z) is added analytically on the block coordinates.
template <typename Scalar>
GradientEstimate<Scalar> smoothed_bcge(OracleProblem<Scalar>& problem, const Vector<Scalar>& x,
                                       const Vector<Scalar>& y, const Vector<Scalar>& z, Scalar p, Scalar r,
                                       const BlockSample& block) {
  if (z.size() != problem.dim_x()) throw DimensionError("smoothed_bcge: anchor length must equal dim_x");
  if (!(p >= Scalar(0))) throw InvalidParameterError("smoothed_bcge: p must be >= 0");
  GradientEstimate<Scalar> out = bcge(problem, x, y, r, block);
  for (Index i : block) out.grad(i) += p * (x(i) - z(i));
  return out;
}

}  // namespace zob
