#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "conemeans/preserver_lab.hpp"

namespace cm = conemeans;
using cm::Matrix;
using cm::MeanFamily;
using cm::MeanSpec;
using cm::PdMatrix;
using cm::PreserverForm;
using cm::PreserverKind;
using cm::PsdMatrix;
using cm::Vector;

namespace {

constexpr std::array<double, 7> kPowers = {1.0, -1.0, 0.5, -0.5, 0.25, -0.25, 1.0 / 3.0};

double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

Vector basis(cm::Index n, cm::Index i) {
  Vector v = Vector::Zero(n);
  v[i] = 1.0;
  return v;
}

PdMatrix pd(const PsdMatrix& m) { return PdMatrix(m.matrix()); }

}  // namespace

TEST(ApplyPreserver, Examples) {
  auto rng = cm::trial_rng(301, 0);
  const auto a = cm::random_psd(3, rng);
  const Matrix id = Matrix::Identity(3, 3);
  EXPECT_LE(dist(cm::apply_preserver(PreserverForm::congruence(id), a).matrix(), a.matrix()), 1e-14);
  EXPECT_LE(dist(cm::apply_preserver(PreserverForm::power_congruence(id, 0.5), a).matrix(), a.matrix()), 1e-12);

  Matrix h(2, 2);
  h << 1.0, cm::Complex(0, 1), cm::Complex(0, -1), 1.0;
  Matrix ht(2, 2);
  ht << 1.0, cm::Complex(0, -1), cm::Complex(0, 1), 1.0;
  const auto jt = PreserverForm::jordan(PreserverKind::JordanTranspose, Matrix::Identity(2, 2), PdMatrix::identity(2));
  EXPECT_LE(dist(cm::apply_preserver(jt, PsdMatrix(h)).matrix(), ht), 1e-15);
}

TEST(ApplyPreserver, PreservesRankAndDefiniteness) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto rng = cm::trial_rng(303, trial);
    const auto n = cm::uniform_index(rng, 2, 4);
    const auto a = cm::random_psd(n, rng);
    const Matrix t = cm::random_invertible(n, rng);
    const auto u = cm::random_unitary(n, rng);
    const auto d = pd(cm::random_pd(n, rng));
    for (const auto& form : {PreserverForm::congruence(t, trial % 2 == 0),
                             PreserverForm::jordan(PreserverKind::JordanUnitary, u, d),
                             PreserverForm::jordan(PreserverKind::JordanTranspose, u, d)}) {
      EXPECT_EQ(cm::rank(cm::apply_preserver(form, a)), cm::rank(a));
    }
  }
}

TEST(ApplyPreserver, RejectsBadForms) {
  EXPECT_THROW((void)PreserverForm::power_congruence(Matrix::Identity(2, 2), 0.0), cm::InvalidExponent);
  EXPECT_THROW((void)PreserverForm::jordan(PreserverKind::JordanUnitary, Matrix::Identity(2, 2) * 2.0,
                                           PdMatrix::identity(2)),
               cm::DomainError);
  const auto singular = PreserverForm::congruence(Matrix::Zero(2, 2));
  EXPECT_THROW((void)cm::apply_preserver(singular, PsdMatrix::identity(2)), cm::SingularT);
}

TEST(VerifyPreserver, CongruencePreservesKuboAndoMeans) {
  for (double p : kPowers) {
    auto rng = cm::trial_rng(305, 0);
    for (bool conj : {false, true}) {
      const auto form = PreserverForm::congruence(cm::random_invertible(3, rng), conj);
      const auto report = cm::verify_preserver(form, MeanSpec(p, MeanFamily::KuboAndo), 100, 11);
      EXPECT_TRUE(report.passed) << p << " " << report.max_residual;
      EXPECT_EQ(report.trials, 100U);
    }
  }
}

TEST(VerifyPreserver, PowerCongruencePreservesConventionalMeans) {
  for (double p : {1.0, -1.0, 0.5, -0.5, 0.25, -0.25, 1.0 / 3.0, 2.0, -2.0}) {
    auto rng = cm::trial_rng(307, 0);
    for (bool conj : {false, true}) {
      const auto form = PreserverForm::power_congruence(cm::random_invertible(3, rng), std::abs(p), conj);
      const auto report = cm::verify_preserver(form, MeanSpec(p, MeanFamily::Conventional), 100, 13);
      EXPECT_TRUE(report.passed) << p << " " << report.max_residual;
    }
  }
}

TEST(VerifyPreserver, PowerCongruenceOnSemidefiniteOperands) {
  for (double p : {1.0, -1.0, 0.5, -0.5, 1.0 / 3.0, -0.25}) {
    auto rng = cm::trial_rng(308, 0);
    const auto form = PreserverForm::power_congruence(cm::random_invertible(3, rng, 10.0), std::abs(p), true);
    const auto report = cm::verify_preserver(form, MeanSpec(p, MeanFamily::Conventional), 100, 14, {},
                                             cm::OperandCone::Semidefinite);
    EXPECT_TRUE(report.passed) << p << " " << report.max_residual;
  }
  const auto form = PreserverForm::power_congruence(Matrix::Identity(2, 2), 2.0);
  EXPECT_THROW((void)cm::verify_preserver(form, MeanSpec(-2.0, MeanFamily::Conventional), 1, 1, {},
                                          cm::OperandCone::Semidefinite),
               cm::DomainError);
}

TEST(VerifyPreserver, JordanFormsPreserveBothFamilies) {
  auto rng = cm::trial_rng(309, 0);
  const auto u = cm::random_unitary(3, rng);
  const auto d = pd(cm::random_pd(3, rng));
  for (auto kind : {PreserverKind::JordanUnitary, PreserverKind::JordanTranspose}) {
    for (double p : {0.5, -0.5}) {
      const auto ka = cm::verify_preserver(cm::PreserverForm::jordan(kind, u, d), MeanSpec(p, MeanFamily::KuboAndo),
                                           50, 17);
      EXPECT_TRUE(ka.passed) << ka.max_residual;
      const auto conv = cm::verify_preserver(cm::PreserverForm::jordan(kind, u, d, p),
                                             MeanSpec(p, MeanFamily::Conventional), 50, 17);
      EXPECT_TRUE(conv.passed) << conv.max_residual;
    }
  }
}

TEST(VerifyPreserver, CongruenceUnderConventionalMeanFails) {
  auto rng = cm::trial_rng(311, 0);
  const auto form = PreserverForm::congruence(cm::random_invertible(3, rng));
  const auto report = cm::verify_preserver(form, MeanSpec(0.5, MeanFamily::Conventional), 100, 19);
  EXPECT_FALSE(report.passed);
  ASSERT_TRUE(report.witness.has_value());
  EXPECT_GT(report.max_residual, 1e-3);
  ASSERT_FALSE(report.failures.empty());
  for (std::size_t i = 1; i < report.failures.size(); ++i) {
    EXPECT_GE(report.failures[i - 1].residual, report.failures[i].residual);
  }
  // The witness reproduces its residual by direct evaluation.
  const PsdMatrix a(report.witness->a);
  const PsdMatrix b(report.witness->b);
  const Matrix lhs = cm::apply_preserver(form, cm::conventional_mean(a, b, 0.5)).matrix();
  const Matrix rhs = cm::conventional_mean(cm::apply_preserver(form, a), cm::apply_preserver(form, b), 0.5).matrix();
  EXPECT_NEAR(dist(lhs, rhs), report.witness->residual, 1e-9 * report.witness->scale);
}

TEST(VerifyPreserver, PairingRules) {
  const Matrix id = Matrix::Identity(2, 2);
  const auto jordan2 = PreserverForm::jordan(PreserverKind::JordanUnitary, id, PdMatrix::identity(2), 0.5);
  EXPECT_THROW((void)cm::verify_preserver(jordan2, MeanSpec(0.25, MeanFamily::KuboAndo), 1, 1),
               cm::IncompatibleForm);
  EXPECT_THROW((void)cm::verify_preserver(PreserverForm::power_congruence(id, 0.25),
                                          MeanSpec(0.5, MeanFamily::Conventional), 1, 1),
               cm::IncompatibleForm);
  EXPECT_EQ(cm::preserver_pairing(PreserverForm::congruence(id), MeanSpec(0.5, MeanFamily::Conventional)), false);
  EXPECT_EQ(cm::preserver_pairing(PreserverForm::congruence(id), MeanSpec(-1, MeanFamily::Conventional)), true);
  EXPECT_EQ(cm::preserver_pairing(PreserverForm::power_congruence(id, 0.5), MeanSpec(0.5, MeanFamily::KuboAndo)),
            false);
}

TEST(VerifyPreserver, Deterministic) {
  auto rng = cm::trial_rng(313, 0);
  const auto form = PreserverForm::congruence(cm::random_invertible(3, rng));
  const auto r1 = cm::verify_preserver(form, MeanSpec(0.5, MeanFamily::Conventional), 30, 5);
  const auto r2 = cm::verify_preserver(form, MeanSpec(0.5, MeanFamily::Conventional), 30, 5);
  EXPECT_EQ(r1.max_residual, r2.max_residual);
  ASSERT_EQ(r1.failures.size(), r2.failures.size());
  for (std::size_t i = 0; i < r1.failures.size(); ++i) EXPECT_EQ(r1.failures[i].digest, r2.failures[i].digest);
}

TEST(SolveKaEquation, Examples) {
  const auto x = cm::solve_ka_equation(PdMatrix::identity(2), pd(PdMatrix::identity(2).scaled(3)), 1.0);
  ASSERT_TRUE(x.has_value());
  EXPECT_LE(dist(x->matrix(), 2.0 * Matrix::Identity(2, 2)), 1e-14);
  for (double p : {1.0, 0.5, 0.25}) {
    EXPECT_FALSE(cm::solve_ka_equation(PdMatrix::identity(2), PdMatrix::identity(2), p).has_value());
  }
  const PdMatrix a = PdMatrix::diagonal({1, 2});
  const PdMatrix b = PdMatrix::diagonal({4, 4});
  const auto y = cm::solve_ka_equation(a, b, 0.5);
  ASSERT_TRUE(y.has_value());
  EXPECT_LE(dist(cm::ka_power_mean(a, *y, 0.5).matrix(), b.matrix() / 4.0), 1e-8);
  EXPECT_THROW((void)cm::solve_ka_equation(a, b, -0.5), cm::InvalidExponent);
}

TEST(SolveKaEquation, RoundTripIffStrictOrder) {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = cm::trial_rng(315, trial);
    const auto n = cm::uniform_index(rng, 1, 4);
    const double p = std::array{1.0, 0.5, 0.25, 1.0 / 3.0}[trial % 4];
    const PdMatrix a = pd(cm::random_pd(n, rng));
    const PdMatrix b = trial % 2 == 0 ? pd(PsdMatrix::from_computed(a.matrix() + cm::random_pd(n, rng).matrix()))
                                      : pd(cm::random_pd(n, rng));
    const auto x = cm::solve_ka_equation(a, b, p);
    EXPECT_EQ(x.has_value(), cm::strict_less(a, b));
    // X m_p-maps its smallest eigenvalue c to about c^p, so when c / ||X|| is
    // near machine precision the stored X cannot reproduce B to 1e-8.
    if (x && x->min_eigenvalue() > 1e-10 * x->max_eigenvalue()) {
      const double scale = std::max({1.0, a.norm(), b.norm()});
      EXPECT_LE(dist(cm::ka_power_mean(a, *x, p).matrix(), b.matrix() / std::pow(2.0, 1.0 / p)), 1e-8 * scale);
    }
  }
}

TEST(SolveConventionalEquation, Examples) {
  const auto x = cm::solve_conventional_equation(PdMatrix::identity(2), pd(PdMatrix::identity(2).scaled(2)), 1.0);
  ASSERT_TRUE(x.has_value());
  EXPECT_LE(dist(x->matrix(), Matrix::Identity(2, 2)), 1e-14);
  EXPECT_FALSE(cm::solve_conventional_equation(pd(PdMatrix::identity(2).scaled(2)), PdMatrix::identity(2), 1.0));
  const PdMatrix a = PdMatrix::diagonal({1, 2});
  const PdMatrix b = PdMatrix::diagonal({3, 4});
  const auto y = cm::solve_conventional_equation(a, b, 0.5);
  ASSERT_TRUE(y.has_value());
  EXPECT_LE(dist(cm::conventional_mean(a, *y, 0.5).matrix(), b.matrix() / 4.0), 1e-8);
  // Equal arguments: solvable on the cone, not strictly.
  EXPECT_TRUE(cm::solve_conventional_equation(a, a, 0.5).has_value());
  EXPECT_FALSE(cm::solve_conventional_equation(a, a, 0.5, true).has_value());
}

TEST(SolveConventionalEquation, RoundTripIffPowerOrder) {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = cm::trial_rng(317, trial);
    const auto n = cm::uniform_index(rng, 1, 4);
    const double p = std::array{1.0, 0.5, 2.0, 0.25}[trial % 4];
    const PdMatrix a = pd(cm::random_pd(n, rng));
    const PdMatrix b = trial % 2 == 0 ? pd(PsdMatrix::from_computed(a.matrix() + cm::random_pd(n, rng).matrix()))
                                      : pd(cm::random_pd(n, rng));
    const auto x = cm::solve_conventional_equation(a, b, p);
    EXPECT_EQ(x.has_value(), cm::loewner_leq(cm::power(a, p), cm::power(b, p)));
    if (x) {
      const double scale = std::max({1.0, a.norm(), b.norm()});
      EXPECT_LE(dist(cm::conventional_mean(a, *x, p).matrix(), b.matrix() / std::pow(2.0, 1.0 / p)),
                1e-8 * scale);
    }
  }
}

TEST(IteratedMean, Examples) {
  auto rng = cm::trial_rng(319, 0);
  const auto a = cm::random_pd(3, rng);
  for (const auto& m : cm::iterated_mean_probe(a, 0.5, 4, 40, 3)) {
    EXPECT_TRUE(m.is_invertible());
  }
  for (const auto& m : cm::iterated_mean_probe(PsdMatrix::zero(3), -0.5, 4, 40, 3)) {
    EXPECT_EQ(m.matrix().norm(), 0.0);
  }
  const auto once = cm::iterated_mean(a, 0.5, {PsdMatrix::zero(3)});
  EXPECT_LE(dist(once.matrix(), a.matrix() / 4.0), 1e-12);
  EXPECT_THROW((void)cm::iterated_mean_probe(a, 0.5, 0, 1, 1), cm::DomainError);
}

TEST(IteratedMean, ReachesEveryInvertibleMatrix) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto rng = cm::trial_rng(321, trial);
    const auto n = cm::uniform_index(rng, 1, 4);
    const double p = std::array{1.0, 0.5, 0.25}[trial % 3];
    const PdMatrix b = pd(cm::random_pd(n, rng).scaled(std::exp(cm::uniform(rng, 0, 4))));
    const PdMatrix c = pd(cm::random_pd(n, rng));
    const auto xs = cm::iterated_mean_path(b, c, p);
    EXPECT_LE(dist(cm::iterated_mean(b, p, xs).matrix(), c.matrix()), 1e-8 * std::max(1.0, c.norm()));
  }
}

TEST(ZeroCharacterization, Witnesses) {
  for (double p : kPowers) {
    for (cm::Index n : {1, 2, 3, 4}) {
      const auto report = cm::zero_characterization_check(p, n, 100, 23);
      EXPECT_TRUE(report.passed) << p << " " << n << " " << report.max_residual;
    }
  }
  // The explicit example from the lemma's recipe.
  const PsdMatrix a = PsdMatrix::diagonal({2, 1});
  const PsdMatrix x = PsdMatrix::diagonal({1, 0});
  const PsdMatrix y = cm::power(
      PsdMatrix::from_computed(2.0 * cm::power(a, 0.5).matrix() - cm::power(x, 0.5).matrix()), 2.0);
  EXPECT_LE(dist(cm::ka_power_mean(x, y, 0.5).matrix(), a.matrix()), 1e-8);
}

TEST(ProjectionCharacterization, Examples) {
  EXPECT_TRUE(cm::projection_characterization_check(PsdMatrix::diagonal({1, 0}), -1));
  EXPECT_FALSE(cm::projection_characterization_check(PsdMatrix::diagonal({0.5, 0.5}), -1));
  EXPECT_TRUE(cm::projection_characterization_check(PsdMatrix::identity(3), -0.5));
  EXPECT_THROW((void)cm::projection_characterization_check(PsdMatrix::identity(3), 0.5), cm::InvalidExponent);
}

TEST(ProjectionCharacterization, AgreesWithIsProjection) {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = cm::trial_rng(323, trial);
    const auto n = cm::uniform_index(rng, 1, 4);
    const auto k = cm::uniform_index(rng, 0, n);
    PsdMatrix a = cm::random_projection(n, k, rng);
    if (trial % 3 == 1) a = a.scaled(cm::uniform(rng, 1.25, 3.0));
    if (trial % 3 == 2) a = cm::random_psd(n, rng);
    for (double p : {-1.0, -0.5}) {
      EXPECT_EQ(cm::projection_characterization_check(a, p), cm::is_projection(a)) << trial;
    }
  }
}

TEST(RangeDisjointness, Examples) {
  const auto disjoint = cm::range_disjointness_check(PsdMatrix::diagonal({1, 0}), PsdMatrix::diagonal({0, 1}), -1);
  EXPECT_TRUE(disjoint.mean_is_zero);
  EXPECT_TRUE(disjoint.ranges_disjoint);
  const auto same = cm::range_disjointness_check(PsdMatrix::identity(2), PsdMatrix::identity(2), -1);
  EXPECT_FALSE(same.mean_is_zero);
  EXPECT_FALSE(same.ranges_disjoint);
  const auto overlap = cm::range_disjointness_check(PsdMatrix::diagonal({1, 0}), PsdMatrix::identity(2), -1);
  EXPECT_FALSE(overlap.mean_is_zero);
  EXPECT_FALSE(overlap.ranges_disjoint);
}

TEST(RangeDisjointness, BooleansAgreeOnMixedPairs) {
  int disjoint = 0;
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = cm::trial_rng(325, trial);
    const auto n = cm::uniform_index(rng, 2, 4);
    const auto a = cm::random_psd(n, rng);
    const auto b = cm::random_psd(n, rng);
    for (double p : {-1.0, -0.5}) {
      const auto r = cm::range_disjointness_check(a, b, p);
      EXPECT_TRUE(r.agree()) << trial;
      disjoint += r.ranges_disjoint ? 1 : 0;
    }
  }
  EXPECT_GT(disjoint, 20);
}

TEST(RangeDisjointness, EpsilonSchemeIsSmallOnDisjointPairs) {
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    auto rng = cm::trial_rng(327, trial);
    const auto n = cm::uniform_index(rng, 2, 4);
    const auto k = cm::uniform_index(rng, 1, n - 1);
    const auto u = cm::random_unitary(n, rng);
    cm::RealVector va = cm::RealVector::Zero(n), vb = cm::RealVector::Zero(n);
    for (cm::Index i = 0; i < n; ++i) (i < k ? va : vb)[i] = std::exp(cm::uniform(rng, -1, 1));
    const auto a = PsdMatrix::from_spectrum(va, u);
    const auto b = PsdMatrix::from_spectrum(vb, u);
    for (double p : {-1.0, -0.5}) {
      EXPECT_LE(cm::ka_power_mean(a, b, p).matrix().norm(), 1e-12);
      const auto f = cm::representing_function_power(p);
      EXPECT_LT(cm::ka_mean_regularized(a, b, f, 1e-9).matrix().norm(), 1e-2);
    }
  }
}

TEST(RankOneMean, Examples) {
  const Vector e1 = basis(2, 0);
  const auto p1 = cm::rank_one_projection(e1).matrix;
  EXPECT_LE(dist(cm::ka_power_mean(p1.scaled(3), p1, -1).matrix(), 1.5 * p1.matrix()), 1e-12);
  EXPECT_TRUE(cm::rank_one_mean_check(p1.scaled(3), e1, -1).passed);
  const auto out = cm::rank_one_mean_check(PsdMatrix::diagonal({1, 0}), basis(2, 1), -1);
  EXPECT_TRUE(out.passed);
  EXPECT_LE(cm::ka_power_mean(PsdMatrix::diagonal({1, 0}), cm::rank_one_projection(basis(2, 1)).matrix, -1)
                .matrix()
                .norm(),
            1e-14);
  auto rng = cm::trial_rng(329, 0);
  const Vector phi = cm::random_unit_vector(3, rng);
  const auto p = cm::rank_one_projection(phi).matrix;
  EXPECT_LE(dist(cm::ka_power_mean(PsdMatrix::identity(3), p, -0.5).matrix(), p.matrix()), 1e-12);
}

TEST(RankOneMean, FormulaHoldsIncludingOutOfRangeVectors) {
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    auto rng = cm::trial_rng(331, trial);
    const auto n = cm::uniform_index(rng, 1, 4);
    const auto a = cm::random_psd(n, rng);
    Vector phi = cm::random_unit_vector(n, rng);
    if (trial % 3 == 0) phi = a.matrix() * phi;
    if (phi.norm() == 0.0) phi = basis(n, 0);
    for (double p : {-1.0, -0.5}) {
      const auto r = cm::rank_one_mean_check(a, phi, p);
      EXPECT_TRUE(r.passed) << trial << " " << r.max_residual;
    }
  }
}

TEST(GapSearch, Examples) {
  EXPECT_LE(cm::gap_search(1, 0.5, 200, 1).gap, 1e-8);
  EXPECT_LE(cm::gap_search(2, 1.0, 200, 1).gap, 1e-8);
  EXPECT_LE(cm::gap_search(2, -1.0, 200, 1).gap, 1e-8);
  const auto rec = cm::gap_search(2, 0.5, 1000, 1);
  EXPECT_GT(rec.gap, 100 * 1e-8);
  EXPECT_GT(rec.gap, 1e-3);
  EXPECT_GT(rec.commutator_norm, 0.0);
  EXPECT_NEAR(cm::mean_gap(rec.a, rec.b, 0.5), rec.gap, 1e-12);
}

TEST(GapSearch, CommutingPairsHaveNoGapAndWitnessIsUnitarilyInvariant) {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto rng = cm::trial_rng(333, trial);
    const auto pair = cm::random_commuting_pair(3, rng);
    EXPECT_LE(cm::mean_gap(pair.a, pair.b, 0.25), 1e-8);
  }
  const auto rec = cm::gap_search(2, -0.5, 300, 2);
  auto rng = cm::trial_rng(335, 0);
  const Matrix u = cm::random_unitary(2, rng);
  EXPECT_NEAR(cm::mean_gap(cm::congruence(u, rec.a), cm::congruence(u, rec.b), -0.5), rec.gap, 1e-8);
}

TEST(ConventionalMean, NotMonotoneForLargeExponents) {
  const auto w = cm::conventional_monotonicity_violation(2.0, 2, 2000, 41);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(cm::loewner_leq(w->a, w->c));
  EXPECT_TRUE(cm::loewner_leq(w->b, w->d));
  EXPECT_FALSE(cm::loewner_leq(cm::conventional_mean(w->a, w->b, 2.0), cm::conventional_mean(w->c, w->d, 2.0)));
  // The Kubo-Ando means with p in ]0, 1] have no such pairs on the same search.
  EXPECT_FALSE(cm::conventional_monotonicity_violation(1.0, 2, 500, 41).has_value());
}
