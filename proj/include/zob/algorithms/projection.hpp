#pragma once

#include "zob/types.hpp"

namespace zob {

/// Componentwise clamp of v onto [lower, upper]. Idempotent.
template <typename Derived, typename DerivedL, typename DerivedU>
Vector<typename Derived::Scalar> project_box(const Eigen::MatrixBase<Derived>& v,
                                             const Eigen::MatrixBase<DerivedL>& lower,
                                             const Eigen::MatrixBase<DerivedU>& upper) {
  if (v.size() != lower.size() || v.size() != upper.size())
    throw DimensionError("project_box: vector and bounds must have equal length");
  return v.cwiseMax(lower).cwiseMin(upper);
}

template <typename Scalar>
Vector<Scalar> project_box(const Vector<Scalar>& v, const Box<Scalar>& box) {
  return project_box(v, box.lower, box.upper);
}

/// Projection onto the dual box [0, y_upper].
template <typename Scalar>
Vector<Scalar> project_dual(const Vector<Scalar>& y, const Vector<Scalar>& y_upper) {
  return project_box(y, Vector<Scalar>::Zero(y_upper.size()), y_upper);
}

}  // namespace zob
