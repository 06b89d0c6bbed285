#pragma once

#include <algorithm>
#include <cmath>

#include "conemeans/errors.hpp"

namespace conemeans {

/// Numerical thresholds used by order predicates, rank decisions and
/// equality checks. All fields are absolute except rank_rel, which is a
/// cutoff relative to the largest eigenvalue.
struct ToleranceConfig {
  double sym = 1e-10;       ///< Hermitian symmetry defect
  double eig = 1e-10;       ///< negative eigenvalues clamped to zero above -eig
  double pd = 1e-10;        ///< smallest eigenvalue of a positive definite matrix
  double recon = 1e-9;      ///< spectral reconstruction
  double order = 1e-9;      ///< Loewner and strict order margins
  double eq = 1e-8;         ///< matrix equality (scaled, see scaled_eq)
  double rank_rel = 1e-10;  ///< relative eigenvalue cutoff for ranges
  /// Relative eigenvalue size below which an eigenvalue is taken to be
  /// roundoff of an exact zero. Non-Lipschitz functions such as t^{1/4}
  /// are evaluated at 0 there.
  double zero_rel = 256 * 2.220446049250313e-16;

  void validate() const {
    for (double v : {sym, eig, pd, recon, order, eq, rank_rel, zero_rel}) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        throw Error("tolerances must be finite and nonnegative");
      }
    }
  }

  /// Equality threshold for operands of norm `scale`: eq * max(1, scale).
  [[nodiscard]] double scaled_eq(double scale) const { return eq * std::max(1.0, scale); }
  [[nodiscard]] double scaled_order(double scale) const { return order * std::max(1.0, scale); }
};

}  // namespace conemeans
