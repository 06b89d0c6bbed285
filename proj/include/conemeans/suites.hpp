#pragma once

// Property suites over random instances: Kubo-Ando axioms, iterated means
// (L1), singular inputs (L2), the transfer property, the two preserver families and the gap
// search. Each suite returns a report of named checks; a failed check
// embeds the worst instance it saw.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "conemeans/cone_geometry.hpp"
#include "conemeans/means.hpp"
#include "conemeans/preserver_lab.hpp"
#include "conemeans/sampling.hpp"

namespace conemeans {

inline constexpr std::array<const char*, 7> kSuiteNames = {"axioms",       "L1",           "L2",  "transfer",
                                                           "preserver-t4", "preserver-t5", "gap"};

struct NamedMatrix {
  std::string name;
  Matrix value;
};

struct Witness {
  std::string label;
  std::vector<NamedMatrix> matrices;
  double residual = 0.0;
};

/// One property checked over `count` instances. Bound checks pass when every
/// relative residual is within `limit`; witness checks pass when the expected
/// counterexample was found, and their residual is the size of that effect.
struct SuiteCheck {
  std::string name;
  bool witness_check = false;
  std::size_t count = 0;
  double limit = 0.0;
  double max_residual = 0.0;
  std::size_t violations = 0;
  bool passed = true;
  std::string note;
};

struct SuiteConfig {
  std::string name;
  double p = 0.5;
  Index dim = 3;
  std::size_t trials = 100;
  std::uint64_t seed = 1;
  ToleranceConfig tol;
};

struct SuiteReport {
  std::string suite;
  double p = 0.0;
  Index dim = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool passed = true;
  double max_residual = 0.0;  ///< over bound checks
  std::vector<SuiteCheck> checks;
  std::vector<Witness> witnesses;

  [[nodiscard]] const SuiteCheck* find(const std::string& check) const {
    for (const SuiteCheck& c : checks) {
      if (c.name == check) return &c;
    }
    return nullptr;
  }
};

namespace detail {

using MatrixRefs = std::initializer_list<std::pair<const char*, const Matrix*>>;

class CheckBuilder {
 public:
  CheckBuilder(std::string name, double limit) {
    check_.name = std::move(name);
    check_.limit = limit;
  }

  void add(double residual, MatrixRefs ms) {
    ++check_.count;
    if (!(residual <= check_.limit)) ++check_.violations;
    if (!have_ || !(residual <= check_.max_residual)) {
      check_.max_residual = std::isfinite(residual) ? residual : std::numeric_limits<double>::max();
      worst_.matrices.clear();
      for (const auto& [name, m] : ms) worst_.matrices.push_back({name, *m});
      have_ = true;
    }
  }

  void note(std::string text) { check_.note = std::move(text); }

  void finish(SuiteReport& report) {
    check_.passed = check_.violations == 0;
    if (!check_.passed && have_) {
      worst_.label = check_.name;
      worst_.residual = check_.max_residual;
      report.witnesses.push_back(std::move(worst_));
    }
    report.checks.push_back(std::move(check_));
  }

 private:
  SuiteCheck check_;
  Witness worst_;
  bool have_ = false;
};

inline void add_witness_check(SuiteReport& report, std::string name, bool found, double effect, std::size_t count,
                              double threshold, std::string note, std::vector<NamedMatrix> matrices) {
  SuiteCheck c;
  c.name = name;
  c.witness_check = true;
  c.count = count;
  c.limit = threshold;
  c.max_residual = effect;
  c.passed = found;
  c.violations = found ? 0 : 1;
  c.note = std::move(note);
  if (!matrices.empty()) report.witnesses.push_back({std::move(name), std::move(matrices), effect});
  report.checks.push_back(std::move(c));
}

inline void add_report_from(CheckBuilder& b, const VerificationReport& r) {
  for (std::size_t i = 0; i < r.trials; ++i) {
    // Only the worst pair is kept by VerificationReport.
    if (i + 1 == r.trials && r.witness) {
      b.add(r.max_residual, {{"A", &r.witness->a}, {"B", &r.witness->b}});
    } else {
      b.add(0.0, {});
    }
  }
}

inline double scale_of(std::initializer_list<const Matrix*> ms) { return operand_scale(ms); }

inline double order_violation(const Matrix& lo, const Matrix& hi, double scale) {
  return std::max(0.0, -min_eigenvalue(hi - lo)) / scale;
}

/// A positive semidefinite C = (X* X)^{1/2}, singular for half the draws.
inline PsdMatrix random_root(Index n, Rng& rng, const ToleranceConfig& tol) {
  return power(random_psd(n, rng), 0.5, tol);
}

/// PSD matrix with the given eigenvalues in a random basis; a random subset
/// of them is set to zero when `allow_zero`.
inline PsdMatrix random_spectrum_in(const Matrix& u, Rng& rng, bool allow_zero) {
  const Index n = u.rows();
  RealVector v(n);
  for (Index i = 0; i < n; ++i) {
    v[i] = allow_zero && uniform(rng, 0.0, 1.0) < 0.3 ? 0.0 : std::exp(uniform(rng, -2.0, 2.0));
  }
  return PsdMatrix::from_spectrum(v, u);
}

// -------------------------------------------------------------------------
// axioms

inline void downward_continuity(SuiteReport& report, const SuiteConfig& cfg, std::size_t cases) {
  const ToleranceConfig& tol = cfg.tol;
  const RepresentingFunction f = representing_function_power(cfg.p);
  const Index n = std::max<Index>(cfg.dim, 2);
  CheckBuilder mono("downward-continuity/monotone", tol.order);
  CheckBuilder lower("downward-continuity/lower-bound", tol.order);
  CheckBuilder tail("downward-continuity/cauchy-tail", 1e-2);
  for (std::size_t trial = 0; trial < cases; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 4);
    const PsdMatrix a = random_singular_psd(n, rng);
    const PsdMatrix b = trial % 3 == 0 ? random_pd(n, rng) : random_singular_psd(n, rng);
    const Matrix limit = ka_mean_from_function(a, b, f, tol).matrix();
    const double scale = scale_of({&a.matrix(), &b.matrix()});
    Matrix prev = ka_mean_regularized(a, b, f, 1.0, tol).matrix();
    double worst_mono = 0.0;
    double worst_lower = order_violation(limit, prev, scale);
    for (int k = 1; k <= 40; ++k) {
      Matrix cur = ka_mean_regularized(a, b, f, std::ldexp(1.0, -k), tol).matrix();
      worst_mono = std::max(worst_mono, order_violation(cur, prev, scale));
      worst_lower = std::max(worst_lower, order_violation(limit, cur, scale));
      prev = std::move(cur);
    }
    const MatrixRefs ms = {{"A", &a.matrix()}, {"B", &b.matrix()}};
    mono.add(worst_mono, ms);
    lower.add(worst_lower, ms);
    tail.add(hermitian_norm(prev - limit) / scale, ms);
  }
  tail.note("||x_N - L|| at eps = 2^-40 bounds ||x_m - x_n|| for m, n >= N");
  mono.finish(report);
  lower.finish(report);
  tail.finish(report);
}

inline void axioms_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const ToleranceConfig& tol = cfg.tol;
  const double p = MeanSpec(cfg.p, MeanFamily::KuboAndo).p();
  const RepresentingFunction f = representing_function_power(p);
  const Index n = cfg.dim;

  CheckBuilder norm("normalization", tol.eq);
  for (Index k = 1; k <= n; ++k) {
    const PsdMatrix id = PsdMatrix::identity(k);
    const Matrix m = ka_power_mean(id, id, p, tol).matrix();
    norm.add((m - id.matrix()).norm(), {{"I", &id.matrix()}});
    // I sigma tI = f(t) I
    for (double t : {0.25, 3.0, 40.0}) {
      const PsdMatrix ti = id.scaled(t);
      const Matrix mt = ka_power_mean(id, ti, p, tol).matrix();
      norm.add((mt - f(t) * id.matrix()).norm() / std::max(1.0, t), {{"tI", &ti.matrix()}});
    }
  }
  norm.finish(report);

  CheckBuilder mono("monotonicity", tol.order);
  CheckBuilder trans("transformer-inequality", tol.order);
  CheckBuilder equal("transformer-equality", tol.eq);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 1);
    const PsdMatrix a = random_psd(n, rng);
    const PsdMatrix b = random_psd(n, rng);
    const PsdMatrix c = PsdMatrix::from_computed(a.matrix() + random_psd(n, rng).matrix(), tol);
    const PsdMatrix d = PsdMatrix::from_computed(b.matrix() + random_psd(n, rng).matrix(), tol);
    const Matrix ab = ka_power_mean(a, b, p, tol).matrix();
    const Matrix cd = ka_power_mean(c, d, p, tol).matrix();
    mono.add(order_violation(ab, cd, scale_of({&c.matrix(), &d.matrix()})),
             {{"A", &a.matrix()}, {"B", &b.matrix()}, {"C", &c.matrix()}, {"D", &d.matrix()}});

    const PsdMatrix root = random_root(n, rng, tol);
    const Matrix& r = root.matrix();
    const Matrix lhs = r * ab * r;
    const Matrix rhs = ka_power_mean(PsdMatrix::from_computed(r * a.matrix() * r, tol),
                                     PsdMatrix::from_computed(r * b.matrix() * r, tol), p, tol)
                           .matrix();
    const double s = scale_of({&a.matrix(), &b.matrix(), &rhs, &lhs});
    const MatrixRefs ms = {{"A", &a.matrix()}, {"B", &b.matrix()}, {"C", &r}};
    trans.add(order_violation(lhs, rhs, s), ms);
    if (root.is_invertible(tol)) equal.add((rhs - lhs).norm() / s, ms);
  }
  mono.note("A <= C, B <= D built as C = A + PSD, D = B + PSD");
  trans.note("C = (X* X)^{1/2}, singular for about half of the draws");
  equal.note("invertible C only");
  mono.finish(report);
  trans.finish(report);
  equal.finish(report);

  downward_continuity(report, cfg, std::max<std::size_t>(1, cfg.trials / 10));

  // The conventional mean is not monotone for p = 2; search for an instance.
  const std::size_t budget = std::max<std::size_t>(cfg.trials, 200);
  const auto w = conventional_monotonicity_violation(2.0, std::max<Index>(n, 2), budget, cfg.seed, 1e-6, tol);
  std::vector<NamedMatrix> ms;
  if (w) ms = {{"A", w->a.matrix()}, {"B", w->b.matrix()}, {"C", w->c.matrix()}, {"D", w->d.matrix()}};
  add_witness_check(report, "conventional-p2-nonmonotone", w.has_value(), w ? w->violation : 0.0, budget, 1e-6,
                    "A <= C and B <= D with A m_2 B not <= C m_2 D", std::move(ms));
}

// -------------------------------------------------------------------------
// L1 (p > 0)

inline void l1_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const ToleranceConfig& tol = cfg.tol;
  const double p = cfg.p;
  if (!(p > 0.0 && p <= 1.0)) throw InvalidExponent("suite L1 needs p in ]0, 1]");
  const Index n = cfg.dim;

  CheckBuilder com("commuting-formula", tol.eq);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 1);
    const Matrix u = random_unitary(n, rng);
    const PsdMatrix a = random_spectrum_in(u, rng, true);
    const PsdMatrix b = random_spectrum_in(u, rng, true);
    const Matrix ka = ka_power_mean(a, b, p, tol).matrix();
    const Matrix avg = (power(a, p, tol).matrix() + power(b, p, tol).matrix()) * 0.5;
    const Matrix direct = power(PsdMatrix::from_computed(avg, tol), 1.0 / p, tol).matrix();
    com.add((ka - direct).norm() / scale_of({&a.matrix(), &b.matrix()}), {{"A", &a.matrix()}, {"B", &b.matrix()}});
  }
  com.note("commuting pairs with some zero eigenvalues");
  com.finish(report);

  CheckBuilder zero("zero-characterization", tol.eq);
  add_report_from(zero, zero_characterization_check(p, n, cfg.trials, cfg.seed, tol));
  zero.note("X = tP, Y = (2A^p - X^p)^{1/p} reconstructs A with X != A");
  zero.finish(report);

  CheckBuilder probe("iterated-means-invertible", 0.0);
  for (std::size_t trial = 0; trial < std::max<std::size_t>(1, cfg.trials / 10); ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 2);
    const PsdMatrix a = random_pd(n, rng);
    const auto elems = iterated_mean_probe(a, p, 4, 10, cfg.seed + trial, tol);
    for (const PsdMatrix& e : elems) {
      probe.add(e.is_invertible(tol) ? 0.0 : 1.0, {{"A", &a.matrix()}, {"element", &e.matrix()}});
    }
  }
  probe.note("residual 1 marks a singular element");
  probe.finish(report);

  CheckBuilder reach("iterated-means-reach", tol.eq);
  for (std::size_t trial = 0; trial < std::max<std::size_t>(1, cfg.trials / 10); ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 3);
    const PdMatrix b(random_pd(n, rng), tol);
    const PdMatrix c(random_pd(n, rng), tol);
    const auto xs = iterated_mean_path(b, c, p, tol);
    const Matrix got = iterated_mean(b, p, xs, tol).matrix();
    reach.add((got - c.matrix()).norm() / scale_of({&b.matrix(), &c.matrix()}),
              {{"B", &b.matrix()}, {"C", &c.matrix()}});
  }
  reach.note("a factor sequence from B reaches C");
  reach.finish(report);
}

// -------------------------------------------------------------------------
// L2 (p < 0)

/// Mixed inputs: projections, scaled projections, singular and definite.
inline PsdMatrix mixed_operand(Index n, Rng& rng) {
  switch (uniform_index(rng, 0, 3)) {
    case 0:
      return random_projection(n, uniform_index(rng, 0, n), rng);
    case 1:
      return random_projection(n, uniform_index(rng, 1, n), rng).scaled(std::exp(uniform(rng, -1.0, 1.0)));
    case 2:
      return random_singular_psd(n, rng);
    default:
      return random_pd(n, rng);
  }
}

/// Pairs whose ranges meet trivially for about half of the draws.
inline std::pair<PsdMatrix, PsdMatrix> mixed_pair(Index n, Rng& rng) {
  const int kind = static_cast<int>(uniform_index(rng, 0, 3));
  if (kind <= 1 && n >= 2) {
    // Ranges spanned by disjoint sets of columns of a random invertible matrix.
    const Matrix t = random_invertible(n, rng);
    const Index k = uniform_index(rng, 1, n - 1);
    const Index m = kind == 0 ? n - k : uniform_index(rng, 1, n - k);
    const Matrix ta = t.leftCols(k);
    const Matrix tb = t.middleCols(k, m);
    const Matrix ga = complex_gaussian(k, k, rng);
    const Matrix gb = complex_gaussian(m, m, rng);
    const Matrix ca = ga * ga.adjoint() + Matrix::Identity(k, k) * 0.1;
    const Matrix cb = gb * gb.adjoint() + Matrix::Identity(m, m) * 0.1;
    return {PsdMatrix::from_computed(ta * ca * ta.adjoint()), PsdMatrix::from_computed(tb * cb * tb.adjoint())};
  }
  return {mixed_operand(n, rng), mixed_operand(n, rng)};
}

inline void l2_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const ToleranceConfig& tol = cfg.tol;
  const double p = cfg.p;
  if (!(p >= -1.0 && p < 0.0)) throw InvalidExponent("suite L2 needs p in [-1, 0[");
  const Index n = cfg.dim;
  const RepresentingFunction f = representing_function_power(p);

  CheckBuilder zero("zero-absorbs", tol.eq);
  add_report_from(zero, zero_characterization_check(p, n, cfg.trials, cfg.seed, tol));
  zero.note("A m_p 0 = 0 m_p A = 0");
  zero.finish(report);

  CheckBuilder proj("projection-characterization", 0.0);
  std::size_t projections = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 1);
    const PsdMatrix a = mixed_operand(n, rng);
    const bool is_proj = is_projection(a, tol);
    projections += is_proj ? 1 : 0;
    proj.add(projection_characterization_check(a, p, tol) == is_proj ? 0.0 : 1.0, {{"A", &a.matrix()}});
  }
  proj.note("I m_p A = A against is_projection; " + std::to_string(projections) + " projections");
  proj.finish(report);

  CheckBuilder disjoint("range-disjointness", 0.0);
  CheckBuilder limit("epsilon-consistency", 1e-2);
  std::size_t disjoint_count = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 2);
    const auto [a, b] = mixed_pair(n, rng);
    const RangeDisjointness r = range_disjointness_check(a, b, p, tol);
    const MatrixRefs ms = {{"A", &a.matrix()}, {"B", &b.matrix()}};
    disjoint.add(r.agree() ? 0.0 : 1.0, ms);
    if (r.ranges_disjoint) {
      ++disjoint_count;
      const double scale = scale_of({&a.matrix(), &b.matrix()});
      limit.add(ka_mean_regularized(a, b, f, 1e-9, tol).matrix().norm() / scale, ms);
    }
  }
  disjoint.note("A m_p B = 0 against trivially meeting ranges; " + std::to_string(disjoint_count) + " disjoint");
  limit.note("(A + eps I) m_p (B + eps I) at eps = 1e-9 on disjoint pairs");
  disjoint.finish(report);
  limit.finish(report);

  CheckBuilder rank_one("rank-one-formula", tol.eq);
  std::size_t outside = 0;
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 3);
    const PsdMatrix a = random_psd(n, rng);
    Vector phi = random_unit_vector(n, rng);
    // A third of the vectors are taken from the kernel when there is one.
    if (trial % 3 == 0 && !a.is_invertible(tol)) {
      phi = a.eigenvectors().col(0);
      ++outside;
    }
    const VerificationReport r = rank_one_mean_check(a, phi, p, tol);
    const Matrix pm = phi * phi.adjoint();
    rank_one.add(r.max_residual, {{"A", &a.matrix()}, {"P", &pm}});
  }
  rank_one.note(std::to_string(outside) + " vectors outside the range");
  rank_one.finish(report);

  CheckBuilder exact("strength-exact", 64 * 2.220446049250313e-16);
  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    Rng rng = trial_rng(cfg.seed, trial, 4);
    const double a11 = std::exp(uniform(rng, -3.0, 3.0));
    const PsdMatrix one = PsdMatrix::diagonal({a11});
    Vector e(1);
    e[0] = std::polar(1.0, uniform(rng, 0.0, 6.283185307179586));
    exact.add(std::abs(strength(one, rank_one_projection(e), tol).value - a11) / a11, {{"A", &one.matrix()}});

    RealVector d(n);
    for (Index i = 0; i < n; ++i) d[i] = uniform(rng, 0.0, 1.0) < 0.25 ? 0.0 : std::exp(uniform(rng, -3.0, 3.0));
    const PsdMatrix diag = PsdMatrix::from_spectrum(d, Matrix::Identity(n, n));
    const Index i = uniform_index(rng, 0, n - 1);
    Vector ei = Vector::Zero(n);
    ei[i] = 1.0;
    // sup{lambda : lambda e_i e_i* <= diag(d)} = d_i
    const StrengthValue s = strength(diag, rank_one_projection(ei), tol);
    const double err = d[i] > 0.0 ? std::abs(s.value - d[i]) / d[i] : (s.in_range ? 1.0 : s.value);
    exact.add(err, {{"A", &diag.matrix()}});

    // A generic unit vector against a definite diagonal: (sum |phi_i|^2 / d_i)^{-1}.
    RealVector dp(n);
    for (Index k = 0; k < n; ++k) dp[k] = std::exp(uniform(rng, -3.0, 3.0));
    const PsdMatrix dpd = PsdMatrix::from_spectrum(dp, Matrix::Identity(n, n));
    const Vector phi = random_unit_vector(n, rng);
    double inv = 0.0;
    for (Index k = 0; k < n; ++k) inv += std::norm(phi[k]) / dp[k];
    exact.add(std::abs(strength(dpd, rank_one_projection(phi), tol).value * inv - 1.0), {{"A", &dpd.matrix()}});
  }
  exact.note("1x1 and diagonal cases, relative error within 64 ulp");
  exact.finish(report);

  CheckBuilder zero_probe("zero-iterated-means", 0.0);
  const auto elems = iterated_mean_probe(PsdMatrix::zero(n), p, 4, static_cast<int>(std::max<std::size_t>(10, cfg.trials / 10)),
                                         cfg.seed, tol);
  for (const PsdMatrix& e : elems) zero_probe.add(e.matrix().norm(), {{"element", &e.matrix()}});
  zero_probe.note("every iterated mean of 0 is 0");
  zero_probe.finish(report);
}

// -------------------------------------------------------------------------
// transfer

inline void transfer_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const ToleranceConfig& tol = cfg.tol;
  const double p = MeanSpec(cfg.p, MeanFamily::KuboAndo).p();
  const Index n = cfg.dim;
  for (bool conj : {false, true}) {
    CheckBuilder b(conj ? "conjugate-linear" : "linear", tol.eq);
    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng = trial_rng(cfg.seed, trial, conj ? 2 : 1);
      const PsdMatrix a = random_psd(n, rng);
      const PsdMatrix bb = random_psd(n, rng);
      const Matrix t = random_invertible(n, rng);
      const PsdMatrix ta = congruence(t, a, conj, tol);
      const PsdMatrix tb = congruence(t, bb, conj, tol);
      const Matrix lhs = congruence(t, ka_power_mean(a, bb, p, tol), conj, tol).matrix();
      const Matrix rhs = ka_power_mean(ta, tb, p, tol).matrix();
      const double scale = scale_of({&ta.matrix(), &tb.matrix(), &lhs});
      b.add((lhs - rhs).norm() / scale, {{"A", &a.matrix()}, {"B", &bb.matrix()}, {"T", &t}});
    }
    b.note(conj ? "T conj(A o B) T* = (T conj(A) T*) o (T conj(B) T*)" : "T (A o B) T* = (TAT*) o (TBT*)");
    b.finish(report);
  }
}

// -------------------------------------------------------------------------
// preservers

/// The maps (T A^e T*)^{1/e} and (D J(A)^e D)^{1/e} raise the condition
/// numbers of T and D to the power 2/e, so for small e the factors are drawn
/// better conditioned to keep the images representable in double precision.
inline Matrix preserver_factor(Index n, Rng& rng, double e) {
  return random_invertible(n, rng, std::min(100.0, std::pow(10.0, 4.0 * e)));
}

inline PdMatrix preserver_weight(Index n, Rng& rng, double e, const ToleranceConfig& tol) {
  return PdMatrix(random_pd_bounded(n, rng, std::min(1.0, e)), tol);
}

/// Runs verify_preserver over a batch of freshly drawn forms.
template <class MakeForm>
void preserver_check(SuiteReport& report, const SuiteConfig& cfg, const std::string& name, const MeanSpec& spec,
                     std::uint64_t stream, MakeForm make_form, std::optional<OperandCone> cone = std::nullopt) {
  const std::size_t per_form = 25;
  const std::size_t forms = std::max<std::size_t>(1, (cfg.trials + per_form - 1) / per_form);
  CheckBuilder b(name, cfg.tol.eq);
  for (std::size_t k = 0; k < forms; ++k) {
    Rng rng = trial_rng(cfg.seed, k, stream);
    const PreserverForm form = make_form(rng);
    const std::size_t count = std::min(per_form, cfg.trials - std::min(cfg.trials, k * per_form));
    const VerificationReport r = verify_preserver(form, spec, std::max<std::size_t>(count, 1), cfg.seed + k, cfg.tol, cone);
    for (std::size_t i = 0; i + 1 < r.trials; ++i) b.add(0.0, {});
    if (r.witness) b.add(r.max_residual, {{"A", &r.witness->a}, {"B", &r.witness->b}, {"T", &form.t}});
  }
  b.note(std::to_string(forms) + " random forms");
  b.finish(report);
}

inline void preserver_t4_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const MeanSpec spec(cfg.p, MeanFamily::KuboAndo);
  const Index n = cfg.dim;
  for (bool conj : {false, true}) {
    preserver_check(report, cfg, conj ? "congruence-conjugate" : "congruence", spec, conj ? 2 : 1,
                    [&](Rng& rng) { return PreserverForm::congruence(preserver_factor(n, rng, 1.0), conj); });
  }
  for (PreserverKind kind : {PreserverKind::JordanUnitary, PreserverKind::JordanTranspose}) {
    preserver_check(report, cfg, to_string(kind), spec, kind == PreserverKind::JordanUnitary ? 3 : 4, [&](Rng& rng) {
      const Matrix u = random_unitary(n, rng);
      return PreserverForm::jordan(kind, u, preserver_weight(n, rng, 1.0, cfg.tol), 1.0, cfg.tol);
    });
  }
}

inline void preserver_t5_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const MeanSpec spec(cfg.p, MeanFamily::Conventional);
  const Index n = cfg.dim;
  const double e = spec.q();
  for (bool conj : {false, true}) {
    preserver_check(report, cfg, conj ? "power-congruence-conjugate" : "power-congruence", spec, conj ? 2 : 1,
                    [&](Rng& rng) { return PreserverForm::power_congruence(preserver_factor(n, rng, e), e, conj); });
  }
  for (PreserverKind kind : {PreserverKind::JordanUnitary, PreserverKind::JordanTranspose}) {
    preserver_check(report, cfg, to_string(kind), spec, kind == PreserverKind::JordanUnitary ? 3 : 4, [&](Rng& rng) {
      const Matrix u = random_unitary(n, rng);
      return PreserverForm::jordan(kind, u, preserver_weight(n, rng, e, cfg.tol), e, cfg.tol);
    });
  }

  // Plain congruence by a nonunitary T does not preserve m_p unless |p| = 1.
  if (std::abs(e - 1.0) <= 1e-12) {
    SuiteCheck c;
    c.name = "adversarial-congruence";
    c.witness_check = true;
    c.note = "skipped: |p| = 1, congruences preserve the mean";
    report.checks.push_back(std::move(c));
    return;
  }
  constexpr double kThreshold = 1e-3;
  Rng rng = trial_rng(cfg.seed, 0, 5);
  const Matrix t = random_invertible(n, rng);
  const PreserverForm form = PreserverForm::congruence(t, false);
  const VerificationReport r = verify_preserver(form, spec, cfg.trials, cfg.seed, cfg.tol);
  std::vector<NamedMatrix> ms;
  double rechecked = 0.0;
  if (r.witness) {
    // Recompute the residual of the stored pair from scratch.
    const PsdMatrix a = PsdMatrix::from_computed(r.witness->a, cfg.tol);
    const PsdMatrix b = PsdMatrix::from_computed(r.witness->b, cfg.tol);
    const Matrix lhs = t * conventional_mean(a, b, spec.p(), cfg.tol).matrix() * t.adjoint();
    const Matrix rhs = conventional_mean(congruence(t, a, false, cfg.tol), congruence(t, b, false, cfg.tol),
                                         spec.p(), cfg.tol)
                           .matrix();
    rechecked = (lhs - rhs).norm() / r.witness->scale;
    ms = {{"A", r.witness->a}, {"B", r.witness->b}, {"T", t}};
  }
  const bool found = !r.passed && r.max_residual > kThreshold &&
                     std::abs(rechecked - r.max_residual) <= 1e-6 * std::max(1.0, r.max_residual);
  add_witness_check(report, "adversarial-congruence", found, r.max_residual, r.trials, kThreshold,
                    "expected to fail; singular value ratio of T " + std::to_string(singular_value_ratio(t)),
                    std::move(ms));
}

// -------------------------------------------------------------------------
// gap

inline void gap_suite(SuiteReport& report, const SuiteConfig& cfg) {
  const ToleranceConfig& tol = cfg.tol;
  const double p = cfg.p;
  if (!(p > -1.0 && p < 1.0 && p != 0.0)) throw InvalidExponent("suite gap needs p in ]-1, 1[ \\ {0}");
  const Index n = cfg.dim;
  const GapRecord g = gap_search(n, p, cfg.trials, cfg.seed, tol);
  const double need = 100.0 * tol.eq;
  std::vector<NamedMatrix> ms = {{"A", g.a.matrix()}, {"B", g.b.matrix()}};
  if (n >= 2) {
    add_witness_check(report, "gap", g.gap > need, g.gap, cfg.trials, need,
                      "commutator norm " + std::to_string(g.commutator_norm), std::move(ms));
  } else {
    CheckBuilder b("gap", tol.eq);
    b.add(g.gap, {{"A", &g.a.matrix()}, {"B", &g.b.matrix()}});
    b.note("scalars commute");
    b.finish(report);
  }

  for (double c : {1.0, -1.0}) {
    CheckBuilder b(c > 0 ? "control-p=1" : "control-p=-1", tol.eq);
    const GapRecord r = gap_search(n, c, cfg.trials, cfg.seed, tol);
    b.add(r.gap / std::max({1.0, r.a.norm(), r.b.norm()}), {{"A", &r.a.matrix()}, {"B", &r.b.matrix()}});
    b.note("both means coincide");
    b.finish(report);
  }

  // Both means are unitarily covariant, so the gap is unitarily invariant.
  CheckBuilder inv("unitary-invariance", tol.eq);
  for (std::size_t k = 0; k < 10; ++k) {
    Rng rng = trial_rng(cfg.seed, k, 6);
    const Matrix u = random_unitary(n, rng);
    const double moved = mean_gap(congruence(u, g.a, false, tol), congruence(u, g.b, false, tol), p, tol);
    inv.add(std::abs(moved - g.gap) / std::max({1.0, g.a.norm(), g.b.norm()}), {{"U", &u}});
  }
  inv.finish(report);

  // Recompute both means of the witness by their closed forms.
  CheckBuilder re("witness-recheck", tol.eq);
  const Matrix avg = (power(g.a, p, tol).matrix() + power(g.b, p, tol).matrix()) * 0.5;
  const Matrix conv = power(PsdMatrix::from_computed(avg, tol), 1.0 / p, tol).matrix();
  const Matrix ka = ka_mean_closed_form(g.a, g.b, representing_function_power(p), tol).matrix();
  re.add(std::abs((conv - ka).norm() - g.gap) / std::max({1.0, g.a.norm(), g.b.norm()}),
         {{"A", &g.a.matrix()}, {"B", &g.b.matrix()}});
  re.finish(report);
}

}  // namespace detail

[[nodiscard]] inline bool is_suite_name(const std::string& name) {
  return std::find(kSuiteNames.begin(), kSuiteNames.end(), name) != kSuiteNames.end();
}

[[nodiscard]] inline SuiteReport run_suite(const SuiteConfig& cfg) {
  cfg.tol.validate();
  if (cfg.dim < 1) throw DomainError("suites need dim >= 1");
  if (cfg.trials < 1) throw DomainError("suites need trials >= 1");
  SuiteReport report;
  report.suite = cfg.name;
  report.p = cfg.p;
  report.dim = cfg.dim;
  report.trials = cfg.trials;
  report.seed = cfg.seed;
  if (cfg.name == "axioms") {
    detail::axioms_suite(report, cfg);
  } else if (cfg.name == "L1") {
    detail::l1_suite(report, cfg);
  } else if (cfg.name == "L2") {
    detail::l2_suite(report, cfg);
  } else if (cfg.name == "transfer") {
    detail::transfer_suite(report, cfg);
  } else if (cfg.name == "preserver-t4") {
    detail::preserver_t4_suite(report, cfg);
  } else if (cfg.name == "preserver-t5") {
    detail::preserver_t5_suite(report, cfg);
  } else if (cfg.name == "gap") {
    detail::gap_suite(report, cfg);
  } else {
    throw DomainError("unknown suite '" + cfg.name + "'");
  }
  for (const SuiteCheck& c : report.checks) {
    report.passed = report.passed && c.passed;
    if (!c.witness_check) report.max_residual = std::max(report.max_residual, c.max_residual);
  }
  return report;
}

}  // namespace conemeans
