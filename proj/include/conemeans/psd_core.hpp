#pragma once

// Hermitian spectral engine: eigendecomposition, functional calculus, real
// powers, Loewner and strict order, congruences and range projections.
// Everything here works over complex matrices of small dimension (<= 16).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "conemeans/errors.hpp"
#include "conemeans/tolerance.hpp"

namespace conemeans {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace detail {

inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline Matrix symmetrized(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

inline void require_same_dim(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                            std::to_string(b) + " differ");
  }
}

}  // namespace detail

/// Eigenvalues sorted ascending with the matching unitary matrix of
/// eigenvectors (as columns).
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  [[nodiscard]] Index dim() const { return eigenvalues.size(); }

  /// U diag(values) U*.
  [[nodiscard]] Matrix synthesize(const RealVector& values) const {
    return eigenvectors * values.asDiagonal() * eigenvectors.adjoint();
  }
  [[nodiscard]] Matrix reconstruct() const { return synthesize(eigenvalues); }

  /// U diag(f(lambda_i)) U*; throws DomainError when f is not finite on the spectrum.
  template <typename F>
  [[nodiscard]] Matrix apply(F&& f) const {
    RealVector mapped(eigenvalues.size());
    for (Index i = 0; i < eigenvalues.size(); ++i) {
      mapped[i] = f(eigenvalues[i]);
      if (!std::isfinite(mapped[i])) {
        throw DomainError("function is not finite at eigenvalue " + std::to_string(eigenvalues[i]));
      }
    }
    return synthesize(mapped);
  }
};

/// Square complex matrix equal to its conjugate transpose.
class HermitianMatrix {
 public:
  /// Validates squareness and symmetry (scaled by the largest entry), then
  /// stores the exactly symmetrized matrix.
  explicit HermitianMatrix(const Matrix& m, const ToleranceConfig& tol = {}) {
    if (m.rows() != m.cols()) {
      throw DimensionMismatch("matrix is not square");
    }
    if (m.rows() < 1) {
      throw DimensionMismatch("matrix dimension must be at least 1");
    }
    if (!m.allFinite()) {
      throw DomainError("matrix has non-finite entries");
    }
    const double defect = detail::max_abs_entry(m - m.adjoint());
    if (defect > tol.sym * std::max(1.0, detail::max_abs_entry(m))) {
      throw NonHermitianInput("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
    }
    m_ = detail::symmetrized(m);
  }

  /// For results of computations that are Hermitian up to roundoff.
  static HermitianMatrix trusted(const Matrix& m) {
    HermitianMatrix h;
    h.m_ = detail::symmetrized(m);
    return h;
  }

  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] Index dim() const { return m_.rows(); }

 private:
  HermitianMatrix() = default;
  Matrix m_;
};

[[nodiscard]] inline SpectralDecomposition spectral(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Continuous functional calculus U diag(f(lambda)) U*.
template <typename F>
[[nodiscard]] HermitianMatrix func_calculus(const HermitianMatrix& a, F&& f) {
  return HermitianMatrix::trusted(spectral(a).apply(std::forward<F>(f)));
}

/// Element of the positive semidefinite cone. Carries its spectral
/// decomposition; eigenvalues in [-tol.eig * scale, 0[ are clamped to 0.
class PsdMatrix {
 public:
  explicit PsdMatrix(const HermitianMatrix& h, const ToleranceConfig& tol = {}) {
    init(conemeans::spectral(h), h.matrix(), tol);
  }
  explicit PsdMatrix(const Matrix& m, const ToleranceConfig& tol = {})
      : PsdMatrix(HermitianMatrix(m, tol), tol) {}

  /// Build from a computed Hermitian result; symmetry is repaired rather than checked.
  static PsdMatrix from_computed(const Matrix& m, const ToleranceConfig& tol = {}) {
    HermitianMatrix h = HermitianMatrix::trusted(m);
    PsdMatrix out;
    out.init(conemeans::spectral(h), h.matrix(), tol);
    return out;
  }

  /// U diag(values) U* from nonnegative values and a unitary U (no eigensolve).
  static PsdMatrix from_spectrum(RealVector values, Matrix unitary) {
    PsdMatrix out;
    for (Index i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) {
        throw DomainError("non-finite eigenvalue");
      }
      if (values[i] < 0.0) {
        throw NotPositiveSemidefinite("negative eigenvalue in spectral construction");
      }
    }
    sort_spectrum(values, unitary);
    out.spec_ = {std::move(values), std::move(unitary)};
    out.m_ = detail::symmetrized(out.spec_.reconstruct());
    return out;
  }

  static PsdMatrix identity(Index n) {
    return from_spectrum(RealVector::Ones(n), Matrix::Identity(n, n));
  }
  static PsdMatrix zero(Index n) { return from_spectrum(RealVector::Zero(n), Matrix::Identity(n, n)); }
  static PsdMatrix diagonal(std::initializer_list<double> d) {
    RealVector v(static_cast<Index>(d.size()));
    Index i = 0;
    for (double x : d) v[i++] = x;
    return from_spectrum(v, Matrix::Identity(v.size(), v.size()));
  }

  [[nodiscard]] const Matrix& matrix() const { return m_; }
  [[nodiscard]] HermitianMatrix hermitian() const { return HermitianMatrix::trusted(m_); }
  [[nodiscard]] Index dim() const { return m_.rows(); }
  [[nodiscard]] const SpectralDecomposition& spectral() const { return spec_; }
  [[nodiscard]] const RealVector& eigenvalues() const { return spec_.eigenvalues; }
  [[nodiscard]] const Matrix& eigenvectors() const { return spec_.eigenvectors; }
  [[nodiscard]] double min_eigenvalue() const { return spec_.eigenvalues[0]; }
  [[nodiscard]] double max_eigenvalue() const { return spec_.eigenvalues[spec_.dim() - 1]; }
  /// Spectral norm (largest eigenvalue).
  [[nodiscard]] double norm() const { return max_eigenvalue(); }

  /// Positive definite with respect to tol.pd and the relative rank cutoff.
  [[nodiscard]] bool is_invertible(const ToleranceConfig& tol = {}) const {
    return min_eigenvalue() > tol.pd && min_eigenvalue() > tol.rank_rel * max_eigenvalue();
  }

  [[nodiscard]] PsdMatrix scaled(double c) const {
    if (!(c >= 0.0)) throw DomainError("scaling factor must be nonnegative");
    return from_spectrum(spec_.eigenvalues * c, spec_.eigenvectors);
  }

 protected:
  PsdMatrix() = default;

 private:
  static void sort_spectrum(RealVector& values, Matrix& vectors) {
    std::vector<Index> order(static_cast<std::size_t>(values.size()));
    for (Index i = 0; i < values.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return values[a] < values[b]; });
    RealVector v(values.size());
    Matrix u(vectors.rows(), vectors.cols());
    for (Index i = 0; i < values.size(); ++i) {
      v[i] = values[order[static_cast<std::size_t>(i)]];
      u.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    values = std::move(v);
    vectors = std::move(u);
  }

  void init(SpectralDecomposition s, const Matrix& m, const ToleranceConfig& tol) {
    const double scale = std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
    bool clamped = false;
    for (Index i = 0; i < s.eigenvalues.size(); ++i) {
      if (s.eigenvalues[i] < 0.0) {
        if (s.eigenvalues[i] < -tol.eig * scale) {
          throw NotPositiveSemidefinite("eigenvalue " + std::to_string(s.eigenvalues[i]) +
                                        " is below the clamping threshold");
        }
        s.eigenvalues[i] = 0.0;
        clamped = true;
      }
    }
    spec_ = std::move(s);
    m_ = clamped ? detail::symmetrized(spec_.reconstruct()) : m;
  }

  Matrix m_;
  SpectralDecomposition spec_;
};

/// Element of the positive definite cone: smallest eigenvalue > tol.pd.
class PdMatrix : public PsdMatrix {
 public:
  explicit PdMatrix(const PsdMatrix& a, const ToleranceConfig& tol = {}) : PsdMatrix(a) {
    if (!(min_eigenvalue() > tol.pd)) {
      throw NotPositiveDefinite("smallest eigenvalue " + std::to_string(min_eigenvalue()) +
                                " is not above tol.pd");
    }
  }
  explicit PdMatrix(const Matrix& m, const ToleranceConfig& tol = {}) : PdMatrix(PsdMatrix(m, tol), tol) {}

  static PdMatrix identity(Index n) { return PdMatrix(PsdMatrix::identity(n)); }
  static PdMatrix diagonal(std::initializer_list<double> d) { return PdMatrix(PsdMatrix::diagonal(d)); }
};

// ---------------------------------------------------------------------------
// Norms and small helpers

/// Spectral norm of a Hermitian matrix.
[[nodiscard]] inline double hermitian_norm(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::symmetrized(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

[[nodiscard]] inline double min_eigenvalue(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::symmetrized(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues()[0];
}

/// Frobenius norm of AB - BA.
[[nodiscard]] inline double commutator_norm(const Matrix& a, const Matrix& b) {
  return (a * b - b * a).norm();
}

[[nodiscard]] inline double singular_value_ratio(const Matrix& t) {
  Eigen::JacobiSVD<Matrix> svd(t);
  const auto& s = svd.singularValues();
  return s[0] == 0.0 ? 0.0 : s[s.size() - 1] / s[0];
}

// ---------------------------------------------------------------------------
// Powers

/// A^r by functional calculus. For r > 0 singular inputs are allowed with
/// 0^r = 0; negative r requires an invertible A.
[[nodiscard]] inline PsdMatrix power(const PsdMatrix& a, double r, const ToleranceConfig& tol = {}) {
  if (!std::isfinite(r)) throw DomainError("exponent must be finite");
  if (r == 0.0) return PsdMatrix::identity(a.dim());
  if (r == 1.0) return a;
  if (r < 0.0 && !a.is_invertible(tol)) {
    throw SingularPower("negative power of a singular matrix");
  }
  // t^r is not Lipschitz at 0 for r < 1, so roundoff of a zero eigenvalue
  // must not be raised to the power.
  const double cutoff = tol.zero_rel * a.max_eigenvalue();
  RealVector v = a.eigenvalues();
  for (Index i = 0; i < v.size(); ++i) {
    v[i] = (v[i] <= 0.0 || v[i] <= cutoff) ? 0.0 : std::pow(v[i], r);
  }
  return PsdMatrix::from_spectrum(std::move(v), a.eigenvectors());
}

[[nodiscard]] inline PdMatrix power(const PdMatrix& a, double r, const ToleranceConfig& tol = {}) {
  return PdMatrix(power(static_cast<const PsdMatrix&>(a), r, tol), ToleranceConfig{.pd = 0.0});
}

[[nodiscard]] inline PdMatrix inverse(const PdMatrix& a, const ToleranceConfig& tol = {}) {
  return power(a, -1.0, tol);
}

/// Number of eigenvalues at or below zero_rel * lambda_max: zeros up to roundoff.
[[nodiscard]] inline Index numerical_nullity(const PsdMatrix& a, const ToleranceConfig& tol = {}) {
  const double cutoff = tol.zero_rel * a.max_eigenvalue();
  Index k = 0;
  for (Index i = 0; i < a.dim(); ++i) k += a.eigenvalues()[i] <= cutoff ? 1 : 0;
  return k;
}

/// Number of eigenvalues above rank_rel * lambda_max (and above zero).
[[nodiscard]] inline Index rank(const PsdMatrix& a, const ToleranceConfig& tol = {}) {
  const double cutoff = tol.rank_rel * a.max_eigenvalue();
  Index r = 0;
  for (Index i = 0; i < a.dim(); ++i) {
    if (a.eigenvalues()[i] > cutoff && a.eigenvalues()[i] > 0.0) ++r;
  }
  return r;
}

/// A^{-1/2} on the range of A and zero on its kernel.
[[nodiscard]] inline Matrix pseudo_inverse_sqrt(const PsdMatrix& a, const ToleranceConfig& tol = {}) {
  const double cutoff = tol.rank_rel * a.max_eigenvalue();
  return a.spectral().apply([cutoff](double x) { return (x > cutoff && x > 0.0) ? 1.0 / std::sqrt(x) : 0.0; });
}

// ---------------------------------------------------------------------------
// Order

/// A <= B in the Loewner order: lambda_min(B - A) >= -tol.order.
[[nodiscard]] inline bool loewner_leq(const PsdMatrix& a, const PsdMatrix& b, const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "loewner_leq");
  return min_eigenvalue(b.matrix() - a.matrix()) >= -tol.order;
}

/// Spectrum of B^{-1/2} A B^{-1/2}, ascending.
[[nodiscard]] inline RealVector relative_spectrum(const PsdMatrix& a, const PdMatrix& b) {
  detail::require_same_dim(a.dim(), b.dim(), "relative_spectrum");
  const Matrix bi = power(b, -0.5).matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(detail::symmetrized(bi * a.matrix() * bi), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// Strict order A < B: spectrum of B^{-1/2} A B^{-1/2} inside ]tol.order, 1 - tol.order[.
[[nodiscard]] inline bool strict_less(const PdMatrix& a, const PdMatrix& b, const ToleranceConfig& tol = {}) {
  const RealVector s = relative_spectrum(a, b);
  return s[0] > tol.order && s[s.size() - 1] < 1.0 - tol.order;
}

// ---------------------------------------------------------------------------
// Congruence and projections

/// T A T*, or T conj(A) T* for a conjugate-linear T.
[[nodiscard]] inline PsdMatrix congruence(const Matrix& t, const PsdMatrix& a, bool conjugate_linear = false,
                                          const ToleranceConfig& tol = {}) {
  if (t.rows() != t.cols()) throw DimensionMismatch("congruence: T is not square");
  detail::require_same_dim(t.rows(), a.dim(), "congruence");
  if (!t.allFinite() || singular_value_ratio(t) <= tol.rank_rel) {
    throw SingularT("congruence: T is not invertible");
  }
  const Matrix src = conjugate_linear ? Matrix(a.matrix().conjugate()) : a.matrix();
  return PsdMatrix::from_computed(t * src * t.adjoint(), tol);
}

/// Orthogonal projection onto the span of eigenvectors with
/// lambda > rank_rel * lambda_max; equals the projection onto rng A^{1/2}.
[[nodiscard]] inline PsdMatrix range_projection(const PsdMatrix& a, const ToleranceConfig& tol = {}) {
  const double cutoff = tol.rank_rel * a.max_eigenvalue();
  RealVector v(a.dim());
  for (Index i = 0; i < a.dim(); ++i) {
    v[i] = (a.eigenvalues()[i] > cutoff && a.eigenvalues()[i] > 0.0) ? 1.0 : 0.0;
  }
  return PsdMatrix::from_spectrum(std::move(v), a.eigenvectors());
}

/// Hermitian idempotent: ||A^2 - A|| <= tol.eq.
[[nodiscard]] inline bool is_projection(const Matrix& a, const ToleranceConfig& tol = {}) {
  if (a.rows() != a.cols()) return false;
  if (detail::max_abs_entry(a - a.adjoint()) > tol.sym) return false;
  return (a * a - a).norm() <= tol.eq;
}

[[nodiscard]] inline bool is_projection(const PsdMatrix& a, const ToleranceConfig& tol = {}) {
  return is_projection(a.matrix(), tol);
}

}  // namespace conemeans
