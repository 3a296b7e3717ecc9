#pragma once

#include <cmath>
#include <cstdint>
#include <memory>

#include "zob/problems/oracle_problem.hpp"
#include "zob/random.hpp"

namespace zob {

/// h(x) = 1/2 ||x - center||^2 subject to ||x||^2 - 1 <= 0, with ||center|| = 2.
/// The KKT point is x* = center / 2 with multiplier y* = 1/2, and h* = 1/2.
template <typename Scalar>
struct QuadBall {
  OracleProblem<Scalar> problem;
  Vector<Scalar> center;
  Vector<Scalar> x_star;
  Vector<Scalar> y_star;
  Scalar h_star;
};

template <typename Scalar = double>
QuadBall<Scalar> make_quad_ball(Index d, std::uint64_t seed) {
  using Vec = Vector<Scalar>;
  if (d < 1) throw DimensionError("make_quad_ball: d must be >= 1");

  RandomStream rng(seed, StreamId::kFixture);
  Vec dir = rng.gaussian_vector<Scalar>(d);
  while (dir.norm() == Scalar(0)) dir = rng.gaussian_vector<Scalar>(d);
  const Vec center = Scalar(2) * dir / dir.norm();

  auto eval = [center](const Vec& x) {
    Evaluation<Scalar> e;
    e.h = Scalar(0.5) * (x - center).squaredNorm();
    e.c.resize(1);
    e.c(0) = x.squaredNorm() - Scalar(1);
    return e;
  };
  auto grads = [center](const Vec& x) {
    TrueGradients<Scalar> g;
    g.grad_h = x - center;
    g.jac_c = (Scalar(2) * x).transpose();
    return g;
  };

  Vec y_upper = Vec::Constant(1, Scalar(10));
  OracleProblem<Scalar> problem(d, y_upper, eval, std::nullopt, grads, "quad_ball");
  return QuadBall<Scalar>{std::move(problem), center, Scalar(0.5) * center, Vec::Constant(1, Scalar(0.5)),
                          Scalar(0.5)};
}

/// Seeded stand-in for a distribution network with curtailable loads.
///
/// x(i) in [0, nominal(i)] is the load curtailed at user i and l = nominal - x
/// is the served load. The objective is the curtailment cost plus a voltage
/// band penalty, and the single constraint caps the network power injection:
///
///   h(x) = sum_i a_i x_i^2 + b_i x_i + rho(x)
///   rho(x) = sum_j max(v_j - v_hi, 0)^2 + max(v_lo - v_j, 0)^2
///   v(x) = 1 + e_sag .* tanh(W_sag l) + e_rip .* tanh(W_rip l)
///   p(x) = sum_i l_i + q^T tanh(M l),      c(x) = p(x) - D
///
/// D is 0.9 times the injection at x = 0, the box-constrained minimizer of the
/// cost, so the constraint is active at the solution.
template <typename Scalar>
struct ToyGridModel {
  using Vec = Vector<Scalar>;
  using Mat = Matrix<Scalar>;

  Vec cost_quadratic;
  Vec cost_linear;
  Vec nominal;
  Mat w_sag;
  Vec e_sag;
  Mat w_ripple;
  Vec e_ripple;
  Mat m_loss;
  Vec q_loss;
  Scalar v_lower = Scalar(0.96);
  Scalar v_upper = Scalar(1.04);
  Scalar reference_load = Scalar(0);

  Vec served(const Vec& x) const { return nominal - x; }

  Vec voltages(const Vec& x) const {
    const Vec l = served(x);
    return (Vec::Ones(e_sag.size()).array() + e_sag.array() * (w_sag * l).array().tanh() +
            e_ripple.array() * (w_ripple * l).array().tanh())
        .matrix();
  }

  Scalar penalty(const Vec& x) const {
    const Vec v = voltages(x);
    const auto over = (v.array() - v_upper).max(Scalar(0));
    const auto under = (v_lower - v.array()).max(Scalar(0));
    return (over.square() + under.square()).sum();
  }

  Scalar injection(const Vec& x) const {
    const Vec l = served(x);
    return l.sum() + q_loss.dot((m_loss * l).array().tanh().matrix());
  }

  Scalar objective(const Vec& x) const {
    return (cost_quadratic.array() * x.array().square() + cost_linear.array() * x.array()).sum() + penalty(x);
  }

  Vec objective_gradient(const Vec& x) const {
    const Vec l = served(x);
    const Vec v = voltages(x);
    const Vec dv = (Scalar(2) * (v.array() - v_upper).max(Scalar(0)) -
                    Scalar(2) * (v_lower - v.array()).max(Scalar(0)))
                       .matrix();
    const Vec sech_sag = Scalar(1) - (w_sag * l).array().tanh().square();
    const Vec sech_rip = Scalar(1) - (w_ripple * l).array().tanh().square();
    // d rho / d l, then chain through l = nominal - x.
    const Vec drho_dl = w_sag.transpose() * (dv.array() * e_sag.array() * sech_sag.array()).matrix() +
                        w_ripple.transpose() * (dv.array() * e_ripple.array() * sech_rip.array()).matrix();
    return (Scalar(2) * cost_quadratic.array() * x.array() + cost_linear.array()).matrix() - drho_dl;
  }

  Vec injection_gradient(const Vec& x) const {
    const Vec l = served(x);
    const Vec sech = Scalar(1) - (m_loss * l).array().tanh().square();
    return -(Vec::Ones(x.size()) + m_loss.transpose() * (q_loss.array() * sech.array()).matrix());
  }
};

template <typename Scalar>
struct ToyGrid {
  OracleProblem<Scalar> problem;
  std::shared_ptr<const ToyGridModel<Scalar>> model;
  /// Injection reduction required at x = 0, p(0) - D.
  Scalar curtailment;
};

template <typename Scalar = double>
ToyGrid<Scalar> make_toy_grid(Index d, std::uint64_t seed) {
  using Vec = Vector<Scalar>;
  using Mat = Matrix<Scalar>;
  if (d < 2) throw DimensionError("make_toy_grid: d must be >= 2");

  RandomStream rng(seed, StreamId::kFixture);
  auto model = std::make_shared<ToyGridModel<Scalar>>();
  const Index nodes = std::max<Index>(2, d / 4);

  model->cost_quadratic.resize(d);
  model->cost_linear.resize(d);
  model->nominal.resize(d);
  for (Index i = 0; i < d; ++i) {
    model->cost_quadratic(i) = rng.uniform<Scalar>(Scalar(0.5), Scalar(1.5));
    model->cost_linear(i) = rng.uniform<Scalar>(Scalar(0), Scalar(5));
    model->nominal(i) = rng.uniform<Scalar>(Scalar(0.5), Scalar(1.5));
  }

  // Each node sags with the load of a random half of the users; rows are
  // scaled so w^T nominal is about 1.5.
  model->w_sag = Mat::Zero(nodes, d);
  model->e_sag.resize(nodes);
  for (Index j = 0; j < nodes; ++j) {
    for (Index i = 0; i < d; ++i)
      if (rng.uniform01() < 0.5) model->w_sag(j, i) = rng.uniform<Scalar>(Scalar(0.2), Scalar(1));
    if (model->w_sag.row(j).sum() == Scalar(0)) model->w_sag(j, static_cast<Index>(rng.uniform_index(d))) = 1;
    const Scalar load = model->w_sag.row(j).dot(model->nominal);
    model->w_sag.row(j) *= Scalar(1.5) / load;
    model->e_sag(j) = -rng.uniform<Scalar>(Scalar(0.08), Scalar(0.2));
  }
  model->w_ripple = Mat(nodes, d);
  model->e_ripple.resize(nodes);
  for (Index j = 0; j < nodes; ++j) {
    for (Index i = 0; i < d; ++i) model->w_ripple(j, i) = rng.gaussian<Scalar>() / std::sqrt(Scalar(d));
    model->e_ripple(j) = rng.uniform<Scalar>(Scalar(-0.01), Scalar(0.01));
  }

  // Losses of roughly 5% of the nominal load.
  const Index feeders = std::max<Index>(2, d / 4);
  model->m_loss = Mat::Zero(feeders, d);
  model->q_loss.resize(feeders);
  const Scalar total = model->nominal.sum();
  for (Index j = 0; j < feeders; ++j) {
    for (Index i = 0; i < d; ++i) model->m_loss(j, i) = rng.uniform<Scalar>(Scalar(0), Scalar(1));
    model->m_loss.row(j) /= model->m_loss.row(j).dot(model->nominal);
    model->q_loss(j) = rng.uniform<Scalar>(Scalar(0.5), Scalar(1.5)) * Scalar(0.05) * total /
                       (Scalar(feeders) * std::tanh(Scalar(1)));
  }

  const Scalar p0 = model->injection(Vec::Zero(d));
  model->reference_load = Scalar(0.9) * p0;

  std::shared_ptr<const ToyGridModel<Scalar>> shared = model;
  auto eval = [shared](const Vec& x) {
    Evaluation<Scalar> e;
    e.h = shared->objective(x);
    e.c.resize(1);
    e.c(0) = shared->injection(x) - shared->reference_load;
    return e;
  };
  auto grads = [shared](const Vec& x) {
    TrueGradients<Scalar> g;
    g.grad_h = shared->objective_gradient(x);
    g.jac_c = shared->injection_gradient(x).transpose();
    return g;
  };

  Box<Scalar> box{Vec::Zero(d), model->nominal};
  OracleProblem<Scalar> problem(d, Vec::Constant(1, Scalar(10)), eval, box, grads, "toy_grid");
  return ToyGrid<Scalar>{std::move(problem), shared, p0 - model->reference_load};
}

/// Standard deviation of additive Gaussian noise per observed channel.
template <typename Scalar>
struct NoiseSpec {
  Scalar objective_std = Scalar(0);
  Vector<Scalar> constraint_std;  // length d_y, or empty for noise-free constraints
  std::uint64_t seed = 0;
};

/// Adds i.i.d. zero-mean Gaussian noise to the observed channels. The clean
/// channel and true gradients pass through unchanged; query counting is that
/// of the wrapped problem.
template <typename Scalar>
OracleProblem<Scalar> wrap_noise(const OracleProblem<Scalar>& problem, const NoiseSpec<Scalar>& spec) {
  using Vec = Vector<Scalar>;
  Vec cstd = spec.constraint_std.size() == 0 ? Vec::Zero(problem.dim_y()) : spec.constraint_std;
  if (cstd.size() != problem.dim_y())
    throw DimensionError("wrap_noise: constraint_std length must equal dim_y");
  if (!(spec.objective_std >= Scalar(0)) || !std::isfinite(static_cast<double>(spec.objective_std)) ||
      !cstd.allFinite() || (cstd.array() < Scalar(0)).any())
    throw InvalidSpecError("wrap_noise: standard deviations must be finite and >= 0");

  auto inner = problem.observed_fn();
  const Scalar hstd = spec.objective_std;
  auto noisy = [inner, hstd, cstd, rng = RandomStream(spec.seed, StreamId::kNoise)](const Vec& x) mutable {
    Evaluation<Scalar> e = inner(x);
    if (hstd != Scalar(0)) e.h += hstd * rng.gaussian<Scalar>();
    for (Index j = 0; j < e.c.size() && j < cstd.size(); ++j)
      if (cstd(j) != Scalar(0)) e.c(j) += cstd(j) * rng.gaussian<Scalar>();
    return e;
  };
  return problem.with_observed(noisy, problem.name() + "+noise");
}

}  // namespace zob
