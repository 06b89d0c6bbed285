#pragma once

// Thompson metric, the sup-ratio M(X/Y), rank-one projections and the
// strength of a PSD matrix along a ray.

#include <algorithm>
#include <cmath>
#include <span>

#include "conemeans/psd_core.hpp"

namespace conemeans {

/// M(A/B) = inf{t > 0 : A <= tB} = lambda_max(B^{-1/2} A B^{-1/2}).
[[nodiscard]] inline double sup_ratio(const PsdMatrix& a, const PdMatrix& b) {
  const RealVector s = relative_spectrum(a, b);
  return std::max(0.0, s[s.size() - 1]);
}

/// log max{M(A/B), M(B/A)}.
[[nodiscard]] inline double thompson_distance(const PdMatrix& a, const PdMatrix& b) {
  return std::max(0.0, std::log(std::max(sup_ratio(a, b), sup_ratio(b, a))));
}

/// ||log(A^{-1/2} B A^{-1/2})|| in the spectral norm.
[[nodiscard]] inline double thompson_distance_log_form(const PdMatrix& a, const PdMatrix& b) {
  const RealVector s = relative_spectrum(b, a);
  return std::max(std::abs(std::log(s[0])), std::abs(std::log(s[s.size() - 1])));
}

struct RankOneProjection {
  Vector vector;     ///< unit vector phi
  PsdMatrix matrix;  ///< phi phi*
};

[[nodiscard]] inline RankOneProjection rank_one_projection(const Vector& phi) {
  const double n = phi.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ZeroVector("rank-one projection of a zero vector");
  Vector unit = phi / n;
  PsdMatrix m = PsdMatrix::from_computed(unit * unit.adjoint());
  return {std::move(unit), std::move(m)};
}

struct StrengthValue {
  double value = 0.0;
  bool in_range = false;  ///< phi in rng A^{1/2}
};

/// sup{lambda >= 0 : lambda P_phi <= A}, evaluated as ||A^{-1/2} phi||^{-2}
/// when phi lies in rng A^{1/2} (pseudo-inverse square root) and 0 otherwise.
[[nodiscard]] inline StrengthValue strength(const PsdMatrix& a, const RankOneProjection& p,
                                            const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), p.vector.size(), "strength");
  const PsdMatrix range = range_projection(a, tol);
  const double outside = (p.vector - range.matrix() * p.vector).norm();
  if (outside > std::sqrt(tol.rank_rel)) return {0.0, false};
  const Vector v = pseudo_inverse_sqrt(a, tol) * p.vector;
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) return {0.0, false};
  return {1.0 / n2, true};
}

/// A <= B tested through strengths along the given rays. Exact only in the
/// limit of all rays; a finite probe set can miss violations.
[[nodiscard]] inline bool leq_via_strengths(const PsdMatrix& a, const PsdMatrix& b,
                                            std::span<const RankOneProjection> probes,
                                            const ToleranceConfig& tol = {}) {
  if (probes.empty()) throw EmptyProbeSet("leq_via_strengths needs at least one probe");
  detail::require_same_dim(a.dim(), b.dim(), "leq_via_strengths");
  return std::all_of(probes.begin(), probes.end(), [&](const RankOneProjection& p) {
    return strength(a, p, tol).value <= strength(b, p, tol).value + tol.order;
  });
}

}  // namespace conemeans
