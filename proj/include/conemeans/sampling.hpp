#pragma once

// Seeded random matrices. Every trial draws from its own generator derived
// from (seed, trial index), so results do not depend on evaluation order.

#include <cstdint>
#include <random>

#include "conemeans/psd_core.hpp"

namespace conemeans {

using Rng = std::mt19937_64;

[[nodiscard]] inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

[[nodiscard]] inline Matrix complex_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(2.0));
  Matrix g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

[[nodiscard]] inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

[[nodiscard]] inline Index uniform_index(Rng& rng, Index lo, Index hi) {
  return static_cast<Index>(std::uniform_int_distribution<long long>(lo, hi)(rng));
}

/// Haar-distributed unitary from the QR factorization of a Gaussian matrix.
[[nodiscard]] inline Matrix random_unitary(Index n, Rng& rng) {
  const Matrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const double m = std::abs(r(i, i));
    if (m > 0.0) q.col(i) *= r(i, i) / m;
  }
  return q;
}

/// G G* / n + delta I with complex Gaussian G.
[[nodiscard]] inline PsdMatrix random_pd(Index n, Rng& rng, double delta = 1e-3) {
  const Matrix g = complex_gaussian(n, n, rng);
  const Matrix m = g * g.adjoint() / static_cast<double>(n) + Matrix::Identity(n, n) * delta;
  return PsdMatrix::from_computed(m);
}

/// Positive definite with eigenvalues e^{U[-r, r]} in a Haar-random basis,
/// so the condition number is at most e^{2r}.
[[nodiscard]] inline PsdMatrix random_pd_bounded(Index n, Rng& rng, double r = 1.0) {
  const Matrix u = random_unitary(n, rng);
  RealVector v(n);
  for (Index i = 0; i < n; ++i) v[i] = std::exp(uniform(rng, -r, r));
  return PsdMatrix::from_spectrum(v, u);
}

/// Orthogonal projection onto a random subspace of dimension k.
[[nodiscard]] inline PsdMatrix random_projection(Index n, Index k, Rng& rng) {
  const Matrix u = random_unitary(n, rng);
  RealVector v = RealVector::Zero(n);
  for (Index i = 0; i < k; ++i) v[i] = 1.0;
  return PsdMatrix::from_spectrum(v, u);
}

/// A positive definite sample with a random subspace of dimension
/// 1..n-1 projected out (rank n - k). For n = 1 this returns 0.
[[nodiscard]] inline PsdMatrix random_singular_psd(Index n, Rng& rng) {
  if (n == 1) return PsdMatrix::zero(1);
  const PsdMatrix a = random_pd(n, rng);
  const Index k = uniform_index(rng, 1, n - 1);
  const Matrix keep = Matrix::Identity(n, n) - random_projection(n, k, rng).matrix();
  // Rebuild from an exact spectrum so the kernel is exactly zero.
  const PsdMatrix raw = PsdMatrix::from_computed(keep * a.matrix() * keep);
  RealVector v = raw.eigenvalues();
  for (Index i = 0; i < k; ++i) v[i] = 0.0;
  return PsdMatrix::from_spectrum(v, raw.eigenvectors());
}

/// Positive definite or singular with equal probability.
[[nodiscard]] inline PsdMatrix random_psd(Index n, Rng& rng) {
  return uniform(rng, 0.0, 1.0) < 0.5 ? random_pd(n, rng) : random_singular_psd(n, rng);
}

/// Gaussian matrix conditioned to have singular value ratio >= 1 / max_cond.
[[nodiscard]] inline Matrix random_invertible(Index n, Rng& rng, double max_cond = 100.0) {
  for (;;) {
    Matrix t = complex_gaussian(n, n, rng);
    if (singular_value_ratio(t) >= 1.0 / max_cond) return t;
  }
}

[[nodiscard]] inline Vector random_unit_vector(Index n, Rng& rng) {
  Vector v = complex_gaussian(n, 1, rng).col(0);
  return v / v.norm();
}

/// A simultaneously diagonalizable positive definite pair U diag(a) U*, U diag(b) U*
/// with eigenvalues in [e^-2, e^2].
struct CommutingPair {
  PsdMatrix a;
  PsdMatrix b;
};

[[nodiscard]] inline CommutingPair random_commuting_pair(Index n, Rng& rng) {
  const Matrix u = random_unitary(n, rng);
  RealVector a(n), b(n);
  for (Index i = 0; i < n; ++i) {
    a[i] = std::exp(uniform(rng, -2.0, 2.0));
    b[i] = std::exp(uniform(rng, -2.0, 2.0));
  }
  return {PsdMatrix::from_spectrum(a, u), PsdMatrix::from_spectrum(b, u)};
}

}  // namespace conemeans
