#pragma once

// Conventional and Kubo-Ando power means, Kubo-Ando means from a
// representing function, the classical named means and the transpose and
// adjoint transforms of representing functions.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "conemeans/psd_core.hpp"

namespace conemeans {

enum class MeanFamily { Conventional, KuboAndo };

[[nodiscard]] inline const char* to_string(MeanFamily f) {
  return f == MeanFamily::Conventional ? "conventional" : "kubo-ando";
}

/// An exponent together with the mean family it is used for.
class MeanSpec {
 public:
  MeanSpec(double p, MeanFamily family) : p_(p), family_(family) {
    if (!std::isfinite(p) || p == 0.0) {
      throw InvalidExponent("mean exponent must be finite and nonzero");
    }
    if (family == MeanFamily::KuboAndo && (p < -1.0 || p > 1.0)) {
      throw InvalidExponent("Kubo-Ando power means need p in [-1, 1]");
    }
  }

  [[nodiscard]] double p() const { return p_; }
  /// |p|; the exponent q = -p used for negative p.
  [[nodiscard]] double q() const { return std::abs(p_); }
  [[nodiscard]] MeanFamily family() const { return family_; }

 private:
  double p_;
  MeanFamily family_;
};

/// Limits of a representing function f at the ends of ]0, inf[.
/// `slope_*` are the limits of f(t)/t. Any of them may be +inf.
struct Asymptotics {
  double at_zero = 0.0;
  double at_infinity = std::numeric_limits<double>::infinity();
  double slope_at_zero = std::numeric_limits<double>::infinity();
  double slope_at_infinity = 0.0;
};

/// Scalar function f: ]0, inf[ -> ]0, inf[ with f(1) = 1 attached to a
/// Kubo-Ando mean through f(t) I = I sigma tI. Operator monotonicity is the
/// caller's responsibility; only necessary scalar conditions are checked.
class RepresentingFunction {
 public:
  RepresentingFunction(std::string name, std::function<double(double)> eval, Asymptotics asymptotics)
      : name_(std::move(name)),
        eval_(std::make_shared<const std::function<double(double)>>(std::move(eval))),
        asym_(asymptotics) {}

  /// f(t) for t > 0; f(0) is the limit at zero.
  double operator()(double t) const {
    if (t > 0.0 && std::isfinite(t)) return (*eval_)(t);
    if (t == 0.0) return asym_.at_zero;
    if (t == std::numeric_limits<double>::infinity()) return asym_.at_infinity;
    throw DomainError("representing function evaluated at " + std::to_string(t));
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] const Asymptotics& asymptotics() const { return asym_; }
  [[nodiscard]] double limit_at_zero() const { return asym_.at_zero; }

  /// f(1) = 1 and f nondecreasing on a logarithmic grid.
  [[nodiscard]] bool satisfies_scalar_conditions(double tol = 1e-8) const {
    if (std::abs((*this)(1.0) - 1.0) > tol) return false;
    double prev = 0.0;
    for (double e = -6.0; e <= 6.0; e += 0.25) {
      const double v = (*this)(std::pow(10.0, e));
      if (!(v > 0.0) || v < prev * (1.0 - tol)) return false;
      prev = v;
    }
    return true;
  }

 private:
  std::string name_;
  std::shared_ptr<const std::function<double(double)>> eval_;
  Asymptotics asym_;
};

// ---------------------------------------------------------------------------
// Scalar power mean and representing functions

/// ((t^p + s^p) / 2)^{1/p} for positive t, s and nonzero p.
[[nodiscard]] inline double scalar_power_mean(double t, double s, double p) {
  if (!(t > 0.0) || !(s > 0.0) || !std::isfinite(t) || !std::isfinite(s)) {
    throw DomainError("scalar power mean needs positive finite arguments");
  }
  if (!std::isfinite(p) || p == 0.0) throw InvalidExponent("scalar power mean needs p != 0");
  // Factor out the larger argument so t^p never overflows.
  const double hi = std::max(t, s);
  const double lo = std::min(t, s);
  const double r = lo / hi;
  if (p > 0.0) return hi * std::pow((1.0 + std::pow(r, p)) / 2.0, 1.0 / p);
  // p < 0: ((1 + r^p)/2)^{1/p} with r^p = (1/r)^q.
  return lo * std::pow((std::pow(r, -p) + 1.0) / 2.0, 1.0 / p);
}

[[nodiscard]] inline RepresentingFunction arithmetic_function() {
  return {"arithmetic", [](double t) { return (1.0 + t) / 2.0; },
          {.at_zero = 0.5,
           .at_infinity = std::numeric_limits<double>::infinity(),
           .slope_at_zero = std::numeric_limits<double>::infinity(),
           .slope_at_infinity = 0.5}};
}

[[nodiscard]] inline RepresentingFunction harmonic_function() {
  return {"harmonic", [](double t) { return 2.0 * t / (1.0 + t); },
          {.at_zero = 0.0, .at_infinity = 2.0, .slope_at_zero = 2.0, .slope_at_infinity = 0.0}};
}

[[nodiscard]] inline RepresentingFunction geometric_function() {
  return {"geometric", [](double t) { return std::sqrt(t); },
          {.at_zero = 0.0,
           .at_infinity = std::numeric_limits<double>::infinity(),
           .slope_at_zero = std::numeric_limits<double>::infinity(),
           .slope_at_infinity = 0.0}};
}

/// t -> ((1 + t^p) / 2)^{1/p}, the function of the Kubo-Ando power mean.
[[nodiscard]] inline RepresentingFunction representing_function_power(double p) {
  if (!std::isfinite(p) || p == 0.0 || p < -1.0 || p > 1.0) {
    throw InvalidExponent("power representing function needs p in [-1, 1] \\ {0}");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto eval = [p](double t) { return scalar_power_mean(1.0, t, p); };
  const std::string name = "power:" + std::to_string(p);
  if (p > 0.0) {
    const double c = std::pow(0.5, 1.0 / p);
    return {name, eval, {.at_zero = c, .at_infinity = inf, .slope_at_zero = inf, .slope_at_infinity = c}};
  }
  // ((2 t^q) / (1 + t^q))^{1/q} with q = -p.
  const double c = std::pow(2.0, -1.0 / p);
  return {name, eval, {.at_zero = 0.0, .at_infinity = c, .slope_at_zero = c, .slope_at_infinity = 0.0}};
}

/// Representing function of the transposed mean: t -> t f(1/t).
[[nodiscard]] inline RepresentingFunction transpose_mean(const RepresentingFunction& f) {
  const Asymptotics& a = f.asymptotics();
  return {"transpose(" + f.name() + ")", [f](double t) { return t * f(1.0 / t); },
          {.at_zero = a.slope_at_infinity,
           .at_infinity = a.slope_at_zero,
           .slope_at_zero = a.at_infinity,
           .slope_at_infinity = a.at_zero}};
}

/// Representing function of the adjoint mean: t -> 1 / f(1/t).
[[nodiscard]] inline RepresentingFunction adjoint_mean(const RepresentingFunction& f) {
  const Asymptotics& a = f.asymptotics();
  return {"adjoint(" + f.name() + ")", [f](double t) { return 1.0 / f(1.0 / t); },
          {.at_zero = 1.0 / a.at_infinity,
           .at_infinity = 1.0 / a.at_zero,
           .slope_at_zero = 1.0 / a.slope_at_infinity,
           .slope_at_infinity = 1.0 / a.slope_at_zero}};
}

/// Parses "arithmetic", "harmonic", "geometric" or "power:<p>".
[[nodiscard]] inline RepresentingFunction representing_function_by_name(const std::string& name) {
  if (name == "arithmetic") return arithmetic_function();
  if (name == "harmonic") return harmonic_function();
  if (name == "geometric") return geometric_function();
  if (name.rfind("power:", 0) == 0) {
    const std::string value = name.substr(6);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(value, &used);
    } catch (const std::exception&) {
      throw InputParseError("bad exponent in '" + name + "'");
    }
    if (used != value.size()) throw InputParseError("bad exponent in '" + name + "'");
    return representing_function_power(p);
  }
  throw InputParseError("unknown mean '" + name + "'");
}

// ---------------------------------------------------------------------------
// Kubo-Ando means on matrices

namespace detail {

/// lambda_min / lambda_max of A above which the closed form is used.
inline constexpr double kClosedFormCondition = 1e-6;

/// Scalar mean a sigma (1 - a) for a in [0, 1], extended to the endpoints.
inline double complementary_mean(const RepresentingFunction& f, double a) {
  if (a <= 0.0) return f.asymptotics().slope_at_infinity;
  if (a >= 1.0) return f.asymptotics().at_zero;
  return a * f((1.0 - a) / a);
}

/// A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2} for invertible A. The `zeros`
/// smallest inner eigenvalues are the kernel of B and are evaluated at 0:
/// f may have infinite slope there, so roundoff must not reach it.
inline PsdMatrix ka_mean_invertible(const PsdMatrix& a, const PsdMatrix& b, const RepresentingFunction& f,
                                    const ToleranceConfig& tol, Index zeros = 0) {
  const Matrix half = a.spectral().apply([](double x) { return std::sqrt(x); });
  const Matrix inv_half = a.spectral().apply([](double x) { return 1.0 / std::sqrt(x); });
  const PsdMatrix inner = PsdMatrix::from_computed(inv_half * b.matrix() * inv_half, tol);
  RealVector v = inner.eigenvalues();
  for (Index i = 0; i < v.size(); ++i) v[i] = f(i < zeros ? 0.0 : v[i]);
  return PsdMatrix::from_computed(half * inner.spectral().synthesize(v) * half, tol);
}

/// Exact route for arbitrary PSD pairs. With S = A + B and the congruence by
/// S^{-1/2} on rng S, the pair becomes (A', I - A'), which commutes, so
/// A sigma B = S^{1/2} g(A') S^{1/2} with g(a) = a sigma (1 - a).
/// Eigenvalue 0 of A' has multiplicity dim ker A and eigenvalue 1 has
/// multiplicity dim ker B - dim ker S; those are set exactly.
inline PsdMatrix ka_mean_normalized(const PsdMatrix& a, const PsdMatrix& b, const RepresentingFunction& f,
                                    const ToleranceConfig& tol) {
  const PsdMatrix sum = PsdMatrix::from_computed(a.matrix() + b.matrix(), tol);
  if (sum.max_eigenvalue() <= 0.0) return PsdMatrix::zero(a.dim());
  const Matrix inv_half = pseudo_inverse_sqrt(sum, tol);
  const Matrix half = sum.spectral().apply([](double x) { return std::sqrt(std::max(x, 0.0)); });
  // 0 <= A' <= I exactly; rounding through an ill-conditioned S may push
  // eigenvalues outside, so they are clipped rather than validated.
  const SpectralDecomposition normalized =
      spectral(HermitianMatrix::trusted(symmetrized(inv_half * a.matrix() * inv_half)));
  const Index n = a.dim();
  const Index zeros = numerical_nullity(a, tol);
  const Index ones =
      std::min(n - zeros, std::max<Index>(0, numerical_nullity(b, tol) - numerical_nullity(sum, tol)));
  RealVector v = normalized.eigenvalues;
  for (Index i = 0; i < n; ++i) {
    const double x = i < zeros ? 0.0 : (i >= n - ones ? 1.0 : std::clamp(v[i], 0.0, 1.0));
    v[i] = complementary_mean(f, x);
  }
  return PsdMatrix::from_computed(half * normalized.synthesize(v) * half, tol);
}

}  // namespace detail

/// Kubo-Ando mean with representing function f, exact for any PSD pair.
/// A well-conditioned A uses the closed form; otherwise the sum-normalized
/// route, whose rounding error grows with the condition of A + B instead
/// of that of A.
[[nodiscard]] inline PsdMatrix ka_mean_from_function(const PsdMatrix& a, const PsdMatrix& b,
                                                     const RepresentingFunction& f,
                                                     const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "ka_mean_from_function");
  if (a.min_eigenvalue() > detail::kClosedFormCondition * a.max_eigenvalue()) {
    return detail::ka_mean_invertible(a, b, f, tol, numerical_nullity(b, tol));
  }
  return detail::ka_mean_normalized(a, b, f, tol);
}

/// The closed form A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}; A must be invertible.
[[nodiscard]] inline PsdMatrix ka_mean_closed_form(const PsdMatrix& a, const PsdMatrix& b,
                                                   const RepresentingFunction& f,
                                                   const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "ka_mean_closed_form");
  if (!a.is_invertible(tol)) throw SingularPower("closed form needs an invertible first argument");
  return detail::ka_mean_invertible(a, b, f, tol, numerical_nullity(b, tol));
}

/// (A + eps I) sigma (B + eps I).
[[nodiscard]] inline PsdMatrix ka_mean_regularized(const PsdMatrix& a, const PsdMatrix& b,
                                                   const RepresentingFunction& f, double eps,
                                                   const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "ka_mean_regularized");
  if (!(eps > 0.0)) throw DomainError("regularization needs eps > 0");
  const Matrix shift = Matrix::Identity(a.dim(), a.dim()) * eps;
  const PsdMatrix ae = PsdMatrix::from_computed(a.matrix() + shift, tol);
  const PsdMatrix be = PsdMatrix::from_computed(b.matrix() + shift, tol);
  return ka_mean_from_function(ae, be, f, tol);
}

/// Downward limit of (A + eps I) sigma (B + eps I) over eps = 1e-4 ... 1e-9.
/// Throws BoundaryDivergence unless the last two iterates differ by less
/// than 10 * tol.eq (scaled by the operand norms).
[[nodiscard]] inline PsdMatrix ka_mean_epsilon_limit(const PsdMatrix& a, const PsdMatrix& b,
                                                     const RepresentingFunction& f,
                                                     const ToleranceConfig& tol = {}) {
  std::optional<PsdMatrix> prev;
  double last_step = std::numeric_limits<double>::infinity();
  for (int k = 4; k <= 9; ++k) {
    PsdMatrix cur = ka_mean_regularized(a, b, f, std::pow(10.0, -k), tol);
    if (prev) last_step = (cur.matrix() - prev->matrix()).norm();
    prev = std::move(cur);
  }
  const double scale = std::max(a.norm(), b.norm());
  if (!(last_step < 10.0 * tol.scaled_eq(scale))) {
    std::ostringstream msg;
    msg << "epsilon iterates did not settle (last step " << last_step << ")";
    throw BoundaryDivergence(msg.str());
  }
  return *prev;
}

/// Kubo-Ando p-th power mean, p in [-1, 1] \ {0}.
[[nodiscard]] inline PsdMatrix ka_power_mean(const PsdMatrix& a, const PsdMatrix& b, double p,
                                             const ToleranceConfig& tol = {}) {
  return ka_mean_from_function(a, b, representing_function_power(p), tol);
}

/// Conventional p-th power mean ((A^p + B^p)/2)^{1/p}. For -1 <= p < 0 it is
/// (A^q m_{-1} B^q)^{1/q} with q = -p, which extends to singular inputs;
/// p < -1 is defined only for invertible pairs.
[[nodiscard]] inline PsdMatrix conventional_mean(const PsdMatrix& a, const PsdMatrix& b, double p,
                                                 const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "conventional_mean");
  if (!std::isfinite(p) || p == 0.0) throw InvalidExponent("conventional mean needs p != 0");
  if (p > 0.0) {
    const Matrix avg = (power(a, p, tol).matrix() + power(b, p, tol).matrix()) * 0.5;
    return power(PsdMatrix::from_computed(avg, tol), 1.0 / p, tol);
  }
  const double q = -p;
  if (p >= -1.0) {
    const PsdMatrix harmonic = ka_power_mean(power(a, q, tol), power(b, q, tol), -1.0, tol);
    return power(harmonic, 1.0 / q, tol);
  }
  if (!a.is_invertible(tol) || !b.is_invertible(tol)) {
    throw SingularPower("conventional mean with p < -1 needs invertible arguments");
  }
  const Matrix avg = (power(a, p, tol).matrix() + power(b, p, tol).matrix()) * 0.5;
  return power(PsdMatrix::from_computed(avg, tol), 1.0 / p, tol);
}

/// Dispatch on a MeanSpec.
[[nodiscard]] inline PsdMatrix power_mean(const PsdMatrix& a, const PsdMatrix& b, const MeanSpec& spec,
                                          const ToleranceConfig& tol = {}) {
  return spec.family() == MeanFamily::KuboAndo ? ka_power_mean(a, b, spec.p(), tol)
                                               : conventional_mean(a, b, spec.p(), tol);
}

enum class NamedMean { Arithmetic, Harmonic, Geometric };

/// (A+B)/2, 2(A^{-1}+B^{-1})^{-1} and A^{1/2}(A^{-1/2}BA^{-1/2})^{1/2}A^{1/2}
/// by their closed forms; singular inputs fall back to ka_mean_from_function.
[[nodiscard]] inline PsdMatrix named_mean(const PsdMatrix& a, const PsdMatrix& b, NamedMean which,
                                          const ToleranceConfig& tol = {}) {
  detail::require_same_dim(a.dim(), b.dim(), "named_mean");
  switch (which) {
    case NamedMean::Arithmetic:
      return PsdMatrix::from_computed((a.matrix() + b.matrix()) * 0.5, tol);
    case NamedMean::Harmonic: {
      if (!a.is_invertible(tol) || !b.is_invertible(tol)) {
        return ka_mean_from_function(a, b, harmonic_function(), tol);
      }
      const Matrix sum = power(a, -1.0, tol).matrix() + power(b, -1.0, tol).matrix();
      return power(PsdMatrix::from_computed(sum, tol), -1.0, tol).scaled(2.0);
    }
    case NamedMean::Geometric: {
      if (!a.is_invertible(tol)) return ka_mean_from_function(a, b, geometric_function(), tol);
      const Matrix half = power(a, 0.5, tol).matrix();
      const Matrix inv_half = power(a, -0.5, tol).matrix();
      const PsdMatrix inner = PsdMatrix::from_computed(inv_half * b.matrix() * inv_half, tol);
      return PsdMatrix::from_computed(half * power(inner, 0.5, tol).matrix() * half, tol);
    }
  }
  throw Error("unknown named mean");
}

}  // namespace conemeans
