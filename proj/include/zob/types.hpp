#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>

#include "zob/errors.hpp"

namespace zob {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

/// Componentwise bounds lower <= x <= upper.
template <typename Scalar>
struct Box {
  Vector<Scalar> lower;
  Vector<Scalar> upper;

  Index size() const { return lower.size(); }
  Vector<Scalar> midpoint() const { return Scalar(0.5) * (lower + upper); }
  bool contains(const Vector<Scalar>& v) const {
    return v.size() == lower.size() && (v.array() >= lower.array()).all() &&
           (v.array() <= upper.array()).all();
  }
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <typename Derived>
std::vector<double> to_std(const Eigen::MatrixBase<Derived>& v) {
  std::vector<double> out(static_cast<std::size_t>(v.size()));
  for (Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<double>(v(i));
  return out;
}

}  // namespace zob
