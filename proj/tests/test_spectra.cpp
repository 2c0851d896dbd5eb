#include <cmath>
#include <numbers>

#include "darboux/spectra.hpp"
#include "doctest.h"

using namespace darboux;
using std::numbers::pi;

namespace {

SpectralProblem oscillator() {
  SpectralProblem p;
  p.name = "oscillator";
  p.q0 = [](double x) { return -x * x; };
  p.q1 = [](double) { return 2.0; };
  p.xLo = -kInfinity;
  p.xHi = kInfinity;
  p.paramLo = 0.0;
  p.paramHi = 12.0;
  return p;
}

SpectralProblem box() {
  SpectralProblem p;
  p.name = "box";
  p.q0 = [](double) { return 0.0; };
  p.q1 = [](double) { return 2.0; };
  p.xLo = 0.0;
  p.xHi = pi;
  p.lo = p.hi = BoundaryCondition::dirichlet();
  p.paramLo = -0.5;
  p.paramHi = 20.0;
  return p;
}

// y'' + (lambda - 2 q cos 2x) y = 0 on one period.
SpectralProblem mathieu(double q) {
  SpectralProblem p;
  p.name = "mathieu";
  p.q0 = [q](double x) { return -2.0 * q * std::cos(2.0 * x); };
  p.q1 = [](double) { return 1.0; };
  p.xLo = 0.0;
  p.xHi = pi;
  p.lo = p.hi = BoundaryCondition::periodic();
  p.paramLo = -3.0;
  p.paramHi = 20.0;
  return p;
}

bool relClose(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("numerov reproduces the harmonic oscillator") {
  const SpectralProblem p = oscillator();
  for (int n = 0; n < 5; ++n) {
    const EigenLevel l = numerovEigen(p, n);
    CHECK(std::abs(l.value - (n + 0.5)) <= 1e-8);
    CHECK(l.nodes == n);
  }
}

TEST_CASE("numerov converges at fourth order") {
  NumerovOptions coarse, fine;
  coarse.h = 0.04;
  fine.h = 0.02;
  const double e1 = numerovEigen(oscillator(), 3, coarse).value - 3.5;
  const double e2 = numerovEigen(oscillator(), 3, fine).value - 3.5;
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("dirichlet box levels") {
  const SpectrumResult r = numerovSpectrum(box(), 4);
  for (int n = 0; n < 4; ++n) CHECK(std::abs(r.levels[n].value - 0.5 * (n + 1) * (n + 1)) <= 1e-9);
}

TEST_CASE("robin start matches the cosine box") {
  SpectralProblem p = box();
  p.lo = BoundaryCondition::robin(0.0, 1.0);  // psi'(0) = 0
  // cos(k x) with cos(k pi) = 0: k = n + 1/2.
  for (int n = 0; n < 3; ++n) CHECK(std::abs(numerovEigen(p, n).value - 0.5 * (n + 0.5) * (n + 0.5)) <= 1e-9);
}

TEST_CASE("power-law start matches the Bessel zeros") {
  // y'' + (2E - (s(s-1))/x^2) y = 0 with s = 3/2 is sqrt(x) J_1(sqrt(2E) x).
  SpectralProblem p = box();
  p.q0 = [](double x) { return -0.75 / (x * x); };
  p.xHi = 1.0;
  p.lo = BoundaryCondition::powerLaw(1.5);
  const double j11 = 3.8317059702075123;
  CHECK(relClose(numerovEigen(p, 0).value, 0.5 * j11 * j11, 1e-7));
}

TEST_CASE("levels are strictly increasing") {
  const SpectrumResult r = numerovSpectrum(p1uProblem(1.0, 0.0, 4.0), 6);
  for (std::size_t k = 1; k < r.levels.size(); ++k) CHECK(r.levels[k].value > r.levels[k - 1].value);
}

TEST_CASE("periodic wronskian condition on plane waves") {
  for (double E : {0.5, 2.0, 4.5}) {
    const double k = std::sqrt(2.0 * E);
    const SolutionFunction f = [k](double x) { return ValueAndDerivative{std::cos(k * x), -k * std::sin(k * x)}; };
    const SolutionFunction g = [k](double x) { return ValueAndDerivative{std::sin(k * x), k * std::cos(k * x)}; };
    CHECK(std::abs(periodicWronskianCondition(f, g, 2 * pi, 0.0)) <= 1e-12);
  }
  const double k = 0.5;
  const SolutionFunction f = [k](double x) { return ValueAndDerivative{std::cos(k * x), -k * std::sin(k * x)}; };
  const SolutionFunction g = [k](double x) { return ValueAndDerivative{std::sin(k * x), k * std::cos(k * x)}; };
  CHECK(std::abs(periodicWronskianCondition(f, g, 2 * pi, 0.0) - 2.0) <= 1e-12);
}

TEST_CASE("periodic numerov agrees with the runge-kutta period map") {
  const SpectralProblem p = mathieu(1.0);
  const auto cond = periodicWronskianCondition(p, pi, 0.0);
  const std::vector<double> rk = scanRoots(cond, p.paramLo, 10.0, 1000, 3);
  for (int n = 0; n < 3; ++n) CHECK(relClose(numerovEigen(p, n).value, rk[n], 1e-7));
  // Characteristic values a0, b2, a2 at q = 1.
  CHECK(std::abs(rk[0] - (-0.45513860410866)) <= 1e-7);
  CHECK(std::abs(rk[1] - 3.91702477299) <= 1e-7);
  CHECK(std::abs(rk[2] - 4.37130098598) <= 1e-7);
  // Free case: the lowest periodic level is zero.
  CHECK(std::abs(numerovEigen(mathieu(0.0), 0).value) <= 1e-8);
  CHECK(std::abs(floquetTrace(mathieu(0.0), 4.0, pi, 0.0, 1e-3) - 2.0) <= 1e-8);
}

TEST_CASE("separated problems of the native and parabolic charts") {
  const double E = 0.7, mu = 1.3;
  const SeparatedProblems nat = deriveSeparated(ModelSpec::free(), Chart::native(), E, mu);
  for (double u : {0.5, 1.5}) CHECK(std::abs(nat.first.Q(u, E) - (4 * E * u - mu)) <= 1e-14);
  CHECK(std::abs(nat.second.Q(0.3, mu) - mu) <= 1e-14);
  const double c = 0.4;
  const SeparatedProblems par = deriveSeparated(ModelSpec::free(), Chart::parabolic(c), E, mu);
  for (double x : {0.3, 1.1}) {
    CHECK(std::abs(par.first.Q(x, E) - (2 * E * std::pow(x, 4) + 4 * E * c * x * x - mu)) <= 1e-13);
    CHECK(std::abs(par.second.Q(x, mu) - (-2 * E * std::pow(x, 4) + 4 * E * c * x * x + mu)) <= 1e-13);
  }
  const SeparatedProblems p1 = deriveSeparated(ModelSpec::p1(1.0, 0.2, 0.1875), Chart::native(), E, mu);
  CHECK(std::abs(p1.first.Q(2.0, E) - (4 * E * 2 - 16.0 - 0.8 - mu)) <= 1e-13);
  CHECK(std::abs(p1.second.Q(0.5, mu) - (mu - 0.25 - 0.75 / 0.25)) <= 1e-13);
}

TEST_CASE("p1 one-dimensional conditions agree with numerov") {
  const P1Spectral s = p1Spectral(ModelSpec::p1(1.0, 0.0, 0.1875));
  CHECK(s.gamma == doctest::Approx(1.0));
  const SpectralProblem v = p1vProblem(s.beta, s.gamma);
  for (int n = 0; n < 5; ++n) CHECK(relClose(quantizeP1v(s.beta, s.gamma, n), numerovEigen(v, n).value, 1e-6));
  const double mu0 = quantizeP1v(s.beta, s.gamma, 0);
  // gamma = 1 makes the lowest v-level the exact Laguerre value 4 beta (1 + gamma)/2.
  CHECK(std::abs(mu0 - 4.0) <= 1e-8);
  const SpectralProblem u = p1uProblem(s.beta, s.b2, mu0);
  for (int n = 0; n < 5; ++n) {
    const double e = quantizeP1u(s.beta, s.b2, mu0, n);
    CHECK(relClose(e, numerovEigen(u, n).value, 1e-6));
    CHECK(std::abs(p1uCondition(s.beta, s.b2, mu0, e)) <= 1e-8);
  }
}

TEST_CASE("p1 robin wall") {
  const double a = 1.0, b = 0.5;
  const SpectralProblem u = p1uProblem(1.0, 0.0, 4.0, a, b);
  for (int n = 0; n < 3; ++n) CHECK(relClose(quantizeP1u(1.0, 0.0, 4.0, n, a, b), numerovEigen(u, n).value, 1e-6));
}

TEST_CASE("p2 periodic condition agrees with numerov and runge-kutta") {
  const double alpha = 1.0, a2 = 0.3, w0 = -pi;
  const SpectralProblem v = p2vProblem(alpha, a2, w0);
  const std::vector<double> rk = scanRoots(periodicWronskianCondition(v, 2 * pi, w0), v.paramLo, 30.0, 800, 5);
  for (int n = 0; n < 5; ++n) {
    const double k = quantizeP2v(alpha, a2, n, w0);
    CHECK(relClose(k, numerovEigen(v, n).value, 1e-6));
    CHECK(relClose(k, rk[n], 1e-8));
  }
  const double kappa0 = quantizeP2v(alpha, a2, 0, w0);
  const SpectralProblem u = p2uProblem(alpha, 0.0, kappa0);
  for (int n = 0; n < 5; ++n) CHECK(relClose(quantizeP2u(alpha, 0.0, kappa0, n), numerovEigen(u, n).value, 1e-6));
  const P2Levels lv = quantizeP2(ModelSpec::p2(0.0, a2, 1.0), 2, w0);
  CHECK(lv.energy == doctest::Approx(quantizeP2u(alpha, 0.0, kappa0, 2)).epsilon(1e-12));
}

TEST_CASE("separated bound states solve the stationary equation") {
  const ModelSpec m1 = ModelSpec::p1(1.0, 0.0, 0.1875);
  const P1Spectral s = p1Spectral(m1);
  const double mu = quantizeP1v(s.beta, s.gamma, 0);
  const double E = quantizeP1u(s.beta, s.b2, mu, 1);
  const SmoothField psi = p1SeparatedState(s, E, mu);
  for (auto [u, v] : interiorPoints(20, 11)) {
    v = std::abs(v);
    CHECK(std::abs(eigenResidual(m1, psi, E, u, v)) <= 1e-6 * std::abs(psi.value(u, v)) + 1e-300);
  }
  // The wall and the far end of the v-interval are nodes.
  CHECK(std::abs(psi.value(0.5, 0.7)) <= 1e-8 * std::abs(psi.value(1.5, 0.7)));
  CHECK(std::abs(psi.value(1.5, 2 * pi)) <= 1e-6 * std::abs(psi.value(1.5, 0.7)));

  const ModelSpec m2 = ModelSpec::p2(0.0, 0.3, 1.0);
  const double kappa = quantizeP2v(1.0, 0.3, 0, -pi);
  const double E2 = quantizeP2u(1.0, 0.0, kappa, 0);
  const SmoothField psi2 = p2SeparatedState(1.0, 0.0, 0.3, E2, kappa, -pi);
  for (auto [u, v] : interiorPoints(20, 11))
    CHECK(std::abs(eigenResidual(m2, psi2, E2, u, v)) <= 1e-6 * std::abs(psi2.value(u, v)));
  const double scale = std::abs(psi2.value(1.5, 0.0));
  CHECK(std::abs(psi2.value(1.5, -pi) - psi2.value(1.5, pi)) <= 1e-6 * scale);
}

TEST_CASE("large-n law for the p1 wall problem") {
  const AsymptoticCheck a = p1Asymptotic(1.0, 0.0, 4.0, 100);
  CHECK(a.ratio >= 0.9);
  CHECK(a.ratio <= 1.1);
  CHECK(a.sign == 1);
}

TEST_CASE("spectral preconditions") {
  CHECK_THROWS_AS(p1Spectral(ModelSpec::p1(-1.0, 0.0, 0.2)), SpectrumUnbounded);
  CHECK_THROWS_AS(p1Spectral(ModelSpec::p1(1.0, 0.0, -0.2)), DomainError);
  CHECK_THROWS_AS(quantizeP2(ModelSpec::p2(0.0, 0.0, -1.0), 0, -pi), SpectrumUnbounded);
  CHECK_THROWS_AS(p1Spectral(ModelSpec::p2(0.0, 0.0, 1.0)), ModelMismatch);
  SpectralProblem p = oscillator();
  p.paramHi = 1.0;
  CHECK_THROWS_AS(numerovEigen(p, 3), NotBracketed);
  CHECK_THROWS_AS(scanRoots([](double x) { return x * x + 1.0; }, -1.0, 1.0, 10, 1), NotBracketed);
}

TEST_CASE("hamilton-jacobi residuals") {
  CHECK(std::abs(hjResidualNative(1.3, 0.7, 1.1, -0.4)) <= 1e-12);
  CHECK(std::abs(hjResidualRotated(0.9, 0.2, 0.6, 1.4, 0.8)) <= 1e-12);
  CHECK(std::abs(hjResidualParabolic(1.1, 0.5, 0.3, 0.9, 0.4, 4.0)) <= 1e-12);
  CHECK(std::abs(hjResidualParabolic(1.1, 0.5, 0.3, 0.9, 0.4, 2.0)) > 1e-3);
  CHECK_THROWS_AS(hjResidualNative(1.0, 3.0, 0.5, 0.0), DomainError);
}
