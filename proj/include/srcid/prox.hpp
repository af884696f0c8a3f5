#ifndef SRCID_PROX_HPP
#define SRCID_PROX_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace srcid {

/// argmin over z in [0, s] of 0.5 (z - v)^2 + threshold |z|.
/// An infinite `s` leaves the upper side open.
template <typename Scalar>
Scalar proxWeightedL1Box(Scalar v, Scalar threshold, Scalar s) {
  // On z >= 0 the objective is a shifted parabola, so clamping the
  // one-sided soft threshold is exact.
  const Scalar shrunk = std::max(v - threshold, Scalar(0));
  return std::isinf(s) ? shrunk : std::min(shrunk, s);
}

/// Elementwise version with per-entry thresholds.
template <typename DerivedV, typename DerivedT>
Eigen::Matrix<typename DerivedV::Scalar, Eigen::Dynamic, 1> proxWeightedL1Box(
    const Eigen::MatrixBase<DerivedV>& v, const Eigen::MatrixBase<DerivedT>& thresholds,
    typename DerivedV::Scalar s) {
  using Scalar = typename DerivedV::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = (v - thresholds).cwiseMax(Scalar(0));
  if (!std::isinf(s)) out = out.cwiseMin(s);
  return out;
}

}  // namespace srcid

#endif  // SRCID_PROX_HPP
