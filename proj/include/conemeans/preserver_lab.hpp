#pragma once

// Mean-preserving maps and their verification, the mean-equation solvers,
// iterated means, checks on singular inputs and the search for pairs on which the
// conventional and the Kubo-Ando power means differ.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conemeans/cone_geometry.hpp"
#include "conemeans/means.hpp"
#include "conemeans/sampling.hpp"

namespace conemeans {

enum class PreserverKind { Congruence, PowerCongruence, JordanUnitary, JordanTranspose };

[[nodiscard]] inline const char* to_string(PreserverKind k) {
  switch (k) {
    case PreserverKind::Congruence:
      return "congruence";
    case PreserverKind::PowerCongruence:
      return "power-congruence";
    case PreserverKind::JordanUnitary:
      return "jordan-unitary";
    case PreserverKind::JordanTranspose:
      return "jordan-transpose";
  }
  return "unknown";
}

/// One of the canonical maps
///   Congruence        A -> T A T*            (T A-bar T* if conjugate linear)
///   PowerCongruence   A -> (T A^e T*)^{1/e}, e = |exponent|
///   JordanUnitary     A -> (D (U A U*)^e D)^{1/e}
///   JordanTranspose   A -> (D (U A^T U*)^e D)^{1/e}
/// For the Jordan kinds `t` holds the unitary U.
struct PreserverForm {
  PreserverKind kind = PreserverKind::Congruence;
  Matrix t;
  bool conjugate_linear = false;
  double exponent = 1.0;
  PdMatrix d = PdMatrix::identity(1);

  [[nodiscard]] Index dim() const { return t.rows(); }
  /// The exponent e actually used by the map (1 for plain congruences).
  [[nodiscard]] double effective_exponent() const {
    return kind == PreserverKind::Congruence ? 1.0 : std::abs(exponent);
  }

  [[nodiscard]] static PreserverForm congruence(Matrix t, bool conjugate_linear = false) {
    PreserverForm f;
    f.kind = PreserverKind::Congruence;
    f.t = std::move(t);
    f.conjugate_linear = conjugate_linear;
    f.d = PdMatrix::identity(f.t.rows());
    return f;
  }

  [[nodiscard]] static PreserverForm power_congruence(Matrix t, double exponent, bool conjugate_linear = false) {
    if (!std::isfinite(exponent) || exponent == 0.0) throw InvalidExponent("power congruence needs exponent != 0");
    PreserverForm f = congruence(std::move(t), conjugate_linear);
    f.kind = PreserverKind::PowerCongruence;
    f.exponent = exponent;
    return f;
  }

  [[nodiscard]] static PreserverForm jordan(PreserverKind kind, Matrix u, PdMatrix d, double exponent = 1.0,
                                            const ToleranceConfig& tol = {}) {
    if (kind != PreserverKind::JordanUnitary && kind != PreserverKind::JordanTranspose) {
      throw IncompatibleForm("jordan() needs a Jordan kind");
    }
    if (!std::isfinite(exponent) || exponent == 0.0) throw InvalidExponent("Jordan form needs exponent != 0");
    detail::require_same_dim(u.rows(), d.dim(), "PreserverForm::jordan");
    const Index n = u.rows();
    if (u.cols() != n || (u.adjoint() * u - Matrix::Identity(n, n)).norm() > tol.recon) {
      throw DomainError("Jordan forms need a unitary matrix");
    }
    PreserverForm f;
    f.kind = kind;
    f.t = std::move(u);
    f.exponent = exponent;
    f.d = std::move(d);
    return f;
  }
};

[[nodiscard]] inline PsdMatrix apply_preserver(const PreserverForm& form, const PsdMatrix& a,
                                               const ToleranceConfig& tol = {}) {
  detail::require_same_dim(form.dim(), a.dim(), "apply_preserver");
  const double e = form.effective_exponent();
  switch (form.kind) {
    case PreserverKind::Congruence:
      return congruence(form.t, a, form.conjugate_linear, tol);
    case PreserverKind::PowerCongruence:
      return power(congruence(form.t, power(a, e, tol), form.conjugate_linear, tol), 1.0 / e, tol);
    case PreserverKind::JordanUnitary:
    case PreserverKind::JordanTranspose: {
      // U A^T U* = U conj(A) U* for Hermitian A.
      const bool transpose = form.kind == PreserverKind::JordanTranspose;
      const PsdMatrix j = congruence(form.t, a, transpose, tol);
      return power(congruence(form.d.matrix(), power(j, e, tol), false, tol), 1.0 / e, tol);
    }
  }
  throw IncompatibleForm("unknown preserver kind");
}

/// Whether the form is one of the known preservers of the mean. Returns nullopt for pairings that are neither
/// sanctioned nor one of the adversarial controls.
[[nodiscard]] inline std::optional<bool> preserver_pairing(const PreserverForm& form, const MeanSpec& spec) {
  const double e = form.effective_exponent();
  const bool unit = std::abs(e - 1.0) <= 1e-12;
  if (spec.family() == MeanFamily::KuboAndo) {
    if (unit) return true;
    if (form.kind == PreserverKind::PowerCongruence) return false;
    return std::nullopt;
  }
  if (std::abs(e - spec.q()) <= 1e-12) return true;
  if (form.kind == PreserverKind::Congruence) return false;
  return std::nullopt;
}

/// FNV-1a over the entries of the given matrices.
[[nodiscard]] inline std::uint64_t matrix_digest(std::initializer_list<const Matrix*> ms) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](double v) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 1099511628211ULL;
    }
  };
  for (const Matrix* m : ms) {
    for (Index j = 0; j < m->cols(); ++j) {
      for (Index i = 0; i < m->rows(); ++i) {
        mix((*m)(i, j).real());
        mix((*m)(i, j).imag());
      }
    }
  }
  return h;
}

struct Failure {
  std::uint64_t digest = 0;
  double residual = 0.0;
};

struct PairWitness {
  Matrix a;
  Matrix b;
  double residual = 0.0;  ///< absolute, Frobenius
  double scale = 1.0;
};

/// Residuals are relative: ||lhs - rhs|| / max(1, operand norms).
struct VerificationReport {
  std::size_t trials = 0;
  double max_residual = 0.0;
  std::vector<Failure> failures;  ///< sorted by residual, largest first
  bool passed = true;
  std::optional<PairWitness> witness;  ///< the worst pair
};

/// Where verification operands are drawn from. Semidefinite draws are
/// singular half of the time.
enum class OperandCone { Definite, Semidefinite };

namespace detail {

class ReportBuilder {
 public:
  explicit ReportBuilder(double limit) : limit_(limit) {}

  void add(const Matrix& a, const Matrix& b, double residual, double scale) {
    const double rel = residual / scale;
    ++report_.trials;
    if (!report_.witness || rel > report_.max_residual) {
      report_.witness = PairWitness{a, b, residual, scale};
    }
    report_.max_residual = std::max(report_.max_residual, rel);
    if (!(rel <= limit_)) report_.failures.push_back({matrix_digest({&a, &b}), rel});
  }

  VerificationReport finish() {
    std::sort(report_.failures.begin(), report_.failures.end(), [](const Failure& x, const Failure& y) {
      return x.residual != y.residual ? x.residual > y.residual : x.digest < y.digest;
    });
    report_.passed = report_.failures.empty() && report_.max_residual <= limit_;
    return std::move(report_);
  }

 private:
  double limit_;
  VerificationReport report_;
};

inline double operand_scale(std::initializer_list<const Matrix*> ms) {
  double s = 1.0;
  for (const Matrix* m : ms) s = std::max(s, hermitian_norm(*m));
  return s;
}

inline PsdMatrix sample_operand(Index n, OperandCone cone, Rng& rng) {
  return cone == OperandCone::Definite ? random_pd(n, rng) : random_psd(n, rng);
}

/// Conventional means are sampled on the definite cone (p < -1 is defined
/// only there); Kubo-Ando means on the semidefinite cone.
inline OperandCone default_cone(const MeanSpec& spec) {
  return spec.family() == MeanFamily::Conventional ? OperandCone::Definite : OperandCone::Semidefinite;
}

}  // namespace detail

/// ||phi(A o B) - phi(A) o phi(B)|| over random pairs, o the mean of `spec`.
/// Throws IncompatibleForm for pairings that are neither sanctioned nor an
/// adversarial control.
[[nodiscard]] inline VerificationReport verify_preserver(const PreserverForm& form, const MeanSpec& spec,
                                                         std::size_t trials, std::uint64_t seed,
                                                         const ToleranceConfig& tol = {},
                                                         std::optional<OperandCone> cone = std::nullopt) {
  if (!preserver_pairing(form, spec)) {
    throw IncompatibleForm(std::string(to_string(form.kind)) + " with exponent " +
                           std::to_string(form.effective_exponent()) + " is not a form for the " +
                           to_string(spec.family()) + " mean with p = " + std::to_string(spec.p()));
  }
  const OperandCone where = cone.value_or(detail::default_cone(spec));
  if (where == OperandCone::Semidefinite && spec.family() == MeanFamily::Conventional && spec.p() < -1.0) {
    throw DomainError("the conventional mean with p < -1 is defined on the definite cone only");
  }
  detail::ReportBuilder builder(tol.eq);
  const Index n = form.dim();
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, trial);
    const PsdMatrix a = detail::sample_operand(n, where, rng);
    const PsdMatrix b = detail::sample_operand(n, where, rng);
    const PsdMatrix lhs = apply_preserver(form, power_mean(a, b, spec, tol), tol);
    const PsdMatrix fa = apply_preserver(form, a, tol);
    const PsdMatrix fb = apply_preserver(form, b, tol);
    const PsdMatrix rhs = power_mean(fa, fb, spec, tol);
    const double scale = detail::operand_scale({&fa.matrix(), &fb.matrix(), &lhs.matrix()});
    builder.add(a.matrix(), b.matrix(), (lhs.matrix() - rhs.matrix()).norm(), scale);
  }
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Mean equations

/// X with A m_p X = B / 2^{1/p}, which exists iff A < B:
/// X = A^{1/2} ((A^{-1/2} B A^{-1/2})^p - I)^{1/p} A^{1/2}.
[[nodiscard]] inline std::optional<PsdMatrix> solve_ka_equation(const PdMatrix& a, const PdMatrix& b, double p,
                                                                const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "solve_ka_equation");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidExponent("solve_ka_equation needs p in ]0, 1]");
  if (!strict_less(a, b, tol)) return std::nullopt;
  const Matrix half = a.spectral().apply([](double x) { return std::sqrt(x); });
  const Matrix inv_half = a.spectral().apply([](double x) { return 1.0 / std::sqrt(x); });
  const PsdMatrix inner = PsdMatrix::from_computed(inv_half * b.matrix() * inv_half, tol);
  const Matrix c = inner.spectral().apply(
      [p](double k) { return std::pow(std::max(std::pow(k, p) - 1.0, 0.0), 1.0 / p); });
  return PsdMatrix::from_computed(half * c * half, tol);
}

/// X with A m_p X = B / 2^{1/p} for the conventional mean, p > 0:
/// X = (B^p - A^p)^{1/p}, available iff A^p <= B^p (A^p < B^p if strict).
[[nodiscard]] inline std::optional<PsdMatrix> solve_conventional_equation(const PdMatrix& a, const PdMatrix& b,
                                                                          double p, bool strict = false,
                                                                          const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "solve_conventional_equation");
  if (!(p > 0.0) || !std::isfinite(p)) throw InvalidExponent("solve_conventional_equation needs p > 0");
  const Matrix ap = power(a, p, tol).matrix();
  const Matrix bp = power(b, p, tol).matrix();
  const HermitianMatrix diff = HermitianMatrix::trusted(detail::symmetrized(bp - ap));
  const SpectralDecomposition s = spectral(diff);
  const double margin = tol.scaled_order(std::max(hermitian_norm(ap), hermitian_norm(bp)));
  const double lo = s.eigenvalues[0];
  if (strict ? !(lo > margin) : !(lo >= -margin)) return std::nullopt;
  RealVector v = s.eigenvalues;
  for (Index i = 0; i < v.size(); ++i) v[i] = std::max(v[i], 0.0);
  return power(PsdMatrix::from_spectrum(v, s.eigenvectors), 1.0 / p, tol);
}

// ---------------------------------------------------------------------------
// Iterated means

/// (...((A m_p X_1) m_p X_2) ...) m_p X_n.
[[nodiscard]] inline PsdMatrix iterated_mean(const PsdMatrix& a, double p, const std::vector<PsdMatrix>& xs,
                                             const ToleranceConfig& tol = {}) {
  PsdMatrix cur = a;
  for (const PsdMatrix& x : xs) cur = ka_power_mean(cur, x, p, tol);
  return cur;
}

/// Random elements of the iterated-mean set of A: for each sample a depth
/// uniform in 1..depth and random PSD factors, a third of them zero.
[[nodiscard]] inline std::vector<PsdMatrix> iterated_mean_probe(const PsdMatrix& a, double p, int depth,
                                                                int samples, std::uint64_t seed,
                                                                const ToleranceConfig& tol = {}) {
  if (depth < 1 || samples < 1) throw DomainError("iterated_mean_probe needs depth >= 1 and samples >= 1");
  std::vector<PsdMatrix> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    Rng rng = trial_rng(seed, static_cast<std::uint64_t>(s));
    const auto k = uniform_index(rng, 1, depth);
    std::vector<PsdMatrix> xs;
    for (Index i = 0; i < k; ++i) {
      xs.push_back(uniform(rng, 0.0, 1.0) < 1.0 / 3.0 ? PsdMatrix::zero(a.dim()) : random_psd(a.dim(), rng));
    }
    out.push_back(iterated_mean(a, p, xs, tol));
  }
  return out;
}

/// Factors X_1..X_n with (...(B m_p X_1)...) m_p X_n = C for invertible B, C
/// and p in ]0, 1]: means with 0 until B' < 2^{1/p} C, one more mean with 0
/// so the last equation is well conditioned, then one solve.
[[nodiscard]] inline std::vector<PsdMatrix> iterated_mean_path(const PdMatrix& b, const PdMatrix& c, double p,
                                                               const ToleranceConfig& tol = {}) {
  detail::require_same_dim(b.dim(), c.dim(), "iterated_mean_path");
  if (!(p > 0.0 && p <= 1.0)) throw InvalidExponent("iterated_mean_path needs p in ]0, 1]");
  const double factor = std::pow(2.0, 1.0 / p);
  const PdMatrix target(c.matrix() * factor, tol);
  std::vector<PsdMatrix> xs;
  PsdMatrix cur = b;
  bool below = false;
  for (;;) {
    const PdMatrix cur_pd(cur.matrix(), tol);
    if (below) {
      if (auto x = solve_ka_equation(cur_pd, target, p, tol)) {
        xs.push_back(std::move(*x));
        return xs;
      }
    }
    below = below || strict_less(cur_pd, target, tol);
    xs.push_back(PsdMatrix::zero(b.dim()));
    cur = ka_power_mean(cur, xs.back(), p, tol);
  }
}

// ---------------------------------------------------------------------------
// Zeros, projections and disjoint ranges

/// p > 0: every nonzero A is a mean X m_p Y with X != A, built from the top
/// spectral projection P of A as X = tP, Y = (2A^p - X^p)^{1/p}, t = lambda_max / 2;
/// for A = 0 every mean of nonzero factors is nonzero.
/// p < 0: A m_p 0 = 0 m_p A = 0.
/// The residual is the relative reconstruction error of the witness.
[[nodiscard]] inline VerificationReport zero_characterization_check(double p, Index dim, std::size_t trials,
                                                                    std::uint64_t seed,
                                                                    const ToleranceConfig& tol = {}) {
  const MeanSpec spec(p, MeanFamily::KuboAndo);
  detail::ReportBuilder builder(tol.eq);
  const PsdMatrix zero = PsdMatrix::zero(dim);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, trial);
    const PsdMatrix a = dim == 1 ? random_pd(dim, rng) : random_psd(dim, rng);
    if (p < 0.0) {
      const double r = std::max(ka_power_mean(a, zero, p, tol).matrix().norm(),
                                ka_power_mean(zero, a, p, tol).matrix().norm());
      builder.add(a.matrix(), zero.matrix(), r, detail::operand_scale({&a.matrix()}));
      continue;
    }
    // Nonzero factors of the zero matrix never give 0.
    const PsdMatrix x0 = random_pd(dim, rng);
    const double x0_mean = ka_power_mean(x0, random_psd(dim, rng), p, tol).norm();
    const double top = a.max_eigenvalue();
    const double gap = tol.scaled_eq(top);
    RealVector mask = RealVector::Zero(dim);
    for (Index i = 0; i < dim; ++i) mask[i] = a.eigenvalues()[i] >= top - gap ? 1.0 : 0.0;
    const double t = top / 2.0;
    const PsdMatrix x = PsdMatrix::from_spectrum(mask * t, a.eigenvectors());
    const Matrix two_ap = 2.0 * power(a, p, tol).matrix();
    const PsdMatrix y = power(PsdMatrix::from_computed(two_ap - power(x, p, tol).matrix(), tol), 1.0 / p, tol);
    const PsdMatrix m = ka_power_mean(x, y, p, tol);
    const double scale = detail::operand_scale({&a.matrix(), &y.matrix()});
    double residual = (m.matrix() - a.matrix()).norm();
    // X must differ from A and the zero matrix must stay indecomposable.
    if ((x.matrix() - a.matrix()).norm() <= tol.scaled_eq(scale)) residual = std::max(residual, scale);
    if (!(x0_mean > tol.scaled_eq(x0.norm()))) residual = std::max(residual, scale);
    builder.add(a.matrix(), y.matrix(), residual, scale);
  }
  return builder.finish();
}

/// Whether I m_p A = A (p in [-1, 0[), which holds exactly for projections.
[[nodiscard]] inline bool projection_characterization_check(const PsdMatrix& a, double p,
                                                            const ToleranceConfig& tol = {}) {
  if (!(p >= -1.0 && p < 0.0)) throw InvalidExponent("projection characterization needs p in [-1, 0[");
  const PsdMatrix m = ka_power_mean(PsdMatrix::identity(a.dim()), a, p, tol);
  return (m.matrix() - a.matrix()).norm() <= tol.scaled_eq(a.norm());
}

/// rank [P_A | P_B] with singular values above sqrt(rank_rel) * sigma_max.
[[nodiscard]] inline Index joint_range_rank(const PsdMatrix& a, const PsdMatrix& b, const ToleranceConfig& tol = {}) {
  const Index n = a.dim();
  Matrix cat(n, 2 * n);
  cat << range_projection(a, tol).matrix(), range_projection(b, tol).matrix();
  const Eigen::JacobiSVD<Matrix> svd(cat);
  const RealVector s = svd.singularValues();
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  const double cut = std::sqrt(tol.rank_rel) * s[0];
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) r += s[i] > cut ? 1 : 0;
  return r;
}

struct RangeDisjointness {
  bool mean_is_zero = false;
  bool ranges_disjoint = false;
  [[nodiscard]] bool agree() const { return mean_is_zero == ranges_disjoint; }
};

/// A m_p B = 0 (p < 0) against rng A^{1/2} and rng B^{1/2} intersecting
/// trivially, both decided independently.
[[nodiscard]] inline RangeDisjointness range_disjointness_check(const PsdMatrix& a, const PsdMatrix& b, double p,
                                                                const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "range_disjointness_check");
  if (!(p >= -1.0 && p < 0.0)) throw InvalidExponent("range disjointness needs p in [-1, 0[");
  RangeDisjointness r;
  const double scale = std::max({1.0, a.norm(), b.norm()});
  r.mean_is_zero = ka_power_mean(a, b, p, tol).matrix().norm() <= tol.scaled_eq(scale);
  r.ranges_disjoint = joint_range_rank(a, b, tol) == rank(a, tol) + rank(b, tol);
  return r;
}

/// ((2 lambda^q) / (1 + lambda^q))^{1/q}, the coefficient of A m_p P.
[[nodiscard]] inline double rank_one_coefficient(double lambda, double q) {
  if (!(lambda > 0.0)) return 0.0;
  const double lq = std::pow(lambda, q);
  return std::pow(2.0 * lq / (1.0 + lq), 1.0 / q);
}

/// A m_p P_phi against the closed form through the strength of A along phi,
/// and (tP) m_p (sP) against its scalar formula for t = strength, s in {1, 2}.
[[nodiscard]] inline VerificationReport rank_one_mean_check(const PsdMatrix& a, const Vector& phi, double p,
                                                            const ToleranceConfig& tol = {}) {
  if (!(p >= -1.0 && p < 0.0)) throw InvalidExponent("rank-one mean formula needs p in [-1, 0[");
  const double q = -p;
  const RankOneProjection proj = rank_one_projection(phi);
  const Matrix& pm = proj.matrix.matrix();
  const double lambda = strength(a, proj, tol).value;
  detail::ReportBuilder builder(tol.eq);
  const PsdMatrix m = ka_power_mean(a, proj.matrix, p, tol);
  const double scale = detail::operand_scale({&a.matrix()});
  builder.add(a.matrix(), pm, (m.matrix() - rank_one_coefficient(lambda, q) * pm).norm(), scale);
  for (double s : {1.0, 2.0}) {
    const PsdMatrix tp = proj.matrix.scaled(lambda);
    const PsdMatrix sp = proj.matrix.scaled(s);
    const Matrix expected = s * rank_one_coefficient(lambda / s, q) * pm;
    builder.add(tp.matrix(), sp.matrix(), (ka_power_mean(tp, sp, p, tol).matrix() - expected).norm(),
                std::max(scale, s));
  }
  return builder.finish();
}

// ---------------------------------------------------------------------------
// Conventional versus Kubo-Ando

struct GapRecord {
  PsdMatrix a = PsdMatrix::zero(1);
  PsdMatrix b = PsdMatrix::zero(1);
  double p = 0.0;
  double gap = 0.0;  ///< ||A m_p B - A 𝔪_p B||, Frobenius
  double commutator_norm = 0.0;
};

[[nodiscard]] inline double mean_gap(const PsdMatrix& a, const PsdMatrix& b, double p,
                                     const ToleranceConfig& tol = {}) {
  return (conventional_mean(a, b, p, tol).matrix() - ka_power_mean(a, b, p, tol).matrix()).norm();
}

/// Largest gap between the two power means over random positive definite
/// pairs. p = +-1 is accepted for control runs.
[[nodiscard]] inline GapRecord gap_search(Index dim, double p, std::size_t trials, std::uint64_t seed,
                                          const ToleranceConfig& tol = {}) {
  if (dim < 1) throw DomainError("gap_search needs dim >= 1");
  const MeanSpec spec(p, MeanFamily::KuboAndo);
  GapRecord best;
  best.p = spec.p();
  bool have = false;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, trial);
    PsdMatrix a = random_pd(dim, rng);
    PsdMatrix b = random_pd(dim, rng);
    const double g = mean_gap(a, b, p, tol);
    if (!have || g > best.gap) {
      best.commutator_norm = commutator_norm(a.matrix(), b.matrix());
      best.a = std::move(a);
      best.b = std::move(b);
      best.gap = g;
      have = true;
    }
  }
  return best;
}

struct MonotonicityWitness {
  PsdMatrix a, b, c, d;  ///< A <= C, B <= D
  double violation = 0.0;  ///< -lambda_min(C m_p D - A m_p B)
};

/// Ordered pairs A <= C, B <= D with A m_p B not below C m_p D for the
/// conventional mean (p > 1 makes this possible). Returns the first pair
/// whose violation exceeds `margin` times the operand scale.
[[nodiscard]] inline std::optional<MonotonicityWitness> conventional_monotonicity_violation(
    double p, Index dim, std::size_t trials, std::uint64_t seed, double margin = 1e-6,
    const ToleranceConfig& tol = {}) {
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = trial_rng(seed, trial);
    PsdMatrix a = random_pd(dim, rng);
    PsdMatrix b = random_pd(dim, rng);
    PsdMatrix c = PsdMatrix::from_computed(a.matrix() + random_psd(dim, rng).matrix(), tol);
    PsdMatrix d = b;
    const Matrix lo = conventional_mean(a, b, p, tol).matrix();
    const Matrix hi = conventional_mean(c, d, p, tol).matrix();
    const double v = -min_eigenvalue(hi - lo);
    if (v > margin * std::max({1.0, c.norm(), d.norm()})) {
      return MonotonicityWitness{std::move(a), std::move(b), std::move(c), std::move(d), v};
    }
  }
  return std::nullopt;
}

}  // namespace conemeans
