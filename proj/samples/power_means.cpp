// Both power means on a non-commuting pair, their gap, and a preserver check.

#include <iomanip>
#include <iostream>

#include "conemeans/conemeans.hpp"

namespace cm = conemeans;

int main() {
  auto rng = cm::trial_rng(2024, 0);
  const cm::PsdMatrix a = cm::random_pd(3, rng);
  const cm::PsdMatrix b = cm::random_pd(3, rng);

  std::cout << std::setprecision(6);
  for (double p : {1.0, 0.5, -0.5, -1.0}) {
    const auto conv = cm::conventional_mean(a, b, p);
    const auto ka = cm::ka_power_mean(a, b, p);
    std::cout << "p = " << std::setw(4) << p << "  ||m_p - ka_p|| = " << (conv.matrix() - ka.matrix()).norm()
              << "\n";
  }

  const cm::PdMatrix pa(a);
  const cm::PdMatrix pb(b);
  std::cout << "Thompson distance d(A, B) = " << cm::thompson_distance(pa, pb) << "\n";

  // T A T* preserves every Kubo-Ando mean.
  const auto form = cm::PreserverForm::congruence(cm::random_invertible(3, rng));
  const auto report = cm::verify_preserver(form, cm::MeanSpec(0.5, cm::MeanFamily::KuboAndo), 200, 7);
  std::cout << "congruence vs Kubo-Ando p=1/2: " << (report.passed ? "preserved" : "not preserved")
            << " (max residual " << report.max_residual << ")\n";

  // The same map does not preserve the conventional mean.
  const auto conv = cm::verify_preserver(form, cm::MeanSpec(0.5, cm::MeanFamily::Conventional), 200, 7);
  std::cout << "congruence vs conventional p=1/2: " << (conv.passed ? "preserved" : "not preserved")
            << " (max residual " << conv.max_residual << ")\n";
  return 0;
}
