#include <cmath>
#include <complex>

#include "darboux/jet.hpp"
#include "doctest.h"

using darboux::Jet;

TEST_CASE("univariate jet reproduces Taylor coefficients of exp and sin") {
  using J = Jet<double, 1>;
  const J x = J::variable(0.3, 0, 6);
  const J e = darboux::exp(x);
  double fact = 1.0;
  for (int k = 0; k <= 6; ++k) {
    if (k > 0) fact *= k;
    CHECK(e.coeff({k}) == doctest::Approx(std::exp(0.3) / fact).epsilon(1e-15));
  }
  const J s = darboux::sin(x);
  CHECK(s.partial({3}) == doctest::Approx(-std::cos(0.3)).epsilon(1e-14));
}

TEST_CASE("product rule and quotient in two variables") {
  using J = Jet<double, 2>;
  const J u = J::variable(1.5, 0, 4), v = J::variable(-0.7, 1, 4);
  const J f = u * u * v / (1.0 + u);
  // d^2 f / du dv = d/du (u^2/(1+u)) = (2u + u^2)/(1+u)^2
  CHECK(f.partial({1, 1}) == doctest::Approx((2 * 1.5 + 1.5 * 1.5) / (2.5 * 2.5)).epsilon(1e-14));
  const J g = darboux::pow(u, 2.5);
  CHECK(g.partial({2, 0}) == doctest::Approx(2.5 * 1.5 * std::pow(1.5, 0.5)).epsilon(1e-14));
}

TEST_CASE("mixed orders shrink to the smaller one and truncation is a prefix") {
  using J = Jet<double, 2>;
  const J a = J::variable(2.0, 0, 5), b = J::variable(1.0, 1, 3);
  CHECK((a * b).order() == 3);
  CHECK((a + b).order() == 3);
  const J f = darboux::exp(a * b);
  const J low = darboux::exp(a.truncated(2) * b.truncated(2));
  for (int k = 0; k < static_cast<int>(low.coefficients().size()); ++k)
    CHECK(f[k] == doctest::Approx(low[k]).epsilon(1e-15));
}

TEST_CASE("complex jets and differentiation") {
  using J = Jet<std::complex<double>, 2>;
  const J v = J::variable(0.4, 1, 5);
  const J phase = darboux::exp(std::complex<double>(0.0, 2.0) * v);
  const J d = phase.diff(1);
  CHECK(std::abs(d.value() - std::complex<double>(0.0, 2.0) * phase.value()) < 1e-15);
  CHECK(d.order() == 4);
}

TEST_CASE("order limits are enforced") {
  using J = Jet<double, 4>;
  CHECK_THROWS_AS(J(1.0, J::kMaxOrder + 1), darboux::JetOrderExceeded);
  CHECK_THROWS_AS(J(1.0, 0).diff(0), darboux::JetOrderExceeded);
  CHECK_THROWS_AS(J(1.0, 1).truncated(2), darboux::JetOrderExceeded);
}
