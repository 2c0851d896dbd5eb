#include <cmath>
#include <random>

#include "darboux/phase.hpp"
#include "doctest.h"

using namespace darboux;

namespace {

// Central-difference gradient, independent of the closed forms.
Gradient4 fdGradient(const ObservableId& o, const PhasePointd& p, const ModelSpec& m) {
  Gradient4 g;
  const Eigen::Vector4d z = toVector(p);
  for (int i = 0; i < 4; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(z[i]));
    Eigen::Vector4d zp = z, zm = z;
    zp[i] += h;
    zm[i] -= h;
    g[i] = (evalObservable(o, fromVector(zp), m) - evalObservable(o, fromVector(zm), m)) / (2 * h);
  }
  return g;
}

std::vector<ModelSpec> allModels() {
  return {ModelSpec::free(), ModelSpec::p1(0.7, -0.4, 0.3), ModelSpec::p2(0.5, -0.8, 0.6), ModelSpec::p3(1.3)};
}

}  // namespace

TEST_CASE("observable values at hand-computed points") {
  const auto free = ModelSpec::free();
  CHECK(evalObservable(obs::X1, {1, 0, 1, 1}, free) == doctest::Approx(1.0));
  CHECK(evalObservable(obs::K, {1, 0, 1, 0}, free) == 0.0);
  CHECK(evalObservable(obs::X2, {2, 1, 0, 2}, free) == doctest::Approx(-8.5));
  CHECK(evalHamiltonian({1, 0, 1, 1}, free) == doctest::Approx(0.5));
  CHECK(evalHamiltonian({1, 0, 1, 1}, ModelSpec::p3(1.0)) == doctest::Approx(1.5));
  CHECK(evalHamiltonian({1, 0, 0, 0}, free) == 0.0);
}

TEST_CASE("gradients at hand-computed points") {
  const auto free = ModelSpec::free();
  CHECK(gradObservable(obs::K, {0.7, 2.0, -1.0, 0.3}, free) == Gradient4(0, 0, 0, 1));
  CHECK(gradObservable(obs::H, {1, 0, 1, 1}, free)[0] == doctest::Approx(-0.5));
  CHECK(gradObservable(obs::X1, {1, 0, 1, 1}, free)[1] == doctest::Approx(-1.0));
}

TEST_CASE("domain and observable errors") {
  CHECK_THROWS_AS(evalObservable(obs::H, {0.0, 1, 1, 1}, ModelSpec::free()), DomainError);
  CHECK_THROWS_AS(evalObservable(obs::H, {-1.0, 1, 1, 1}, ModelSpec::free()), DomainError);
  CHECK_THROWS_AS(evalObservable(obs::H, {1, 0.0, 1, 1}, ModelSpec::p1(1, 0, 0.5)), DomainError);
  CHECK_NOTHROW(evalObservable(obs::H, {1, 0.0, 1, 1}, ModelSpec::p1(1, 0, 0.0)));
  CHECK_THROWS_AS(evalObservable(obs::R1, {1, 0, 1, 1}, ModelSpec::free()), InvalidObservable);
  CHECK_THROWS_AS(evalObservable(obs::H, {1, 0, 1, 1}, ModelSpec{Potential::P2, {1.0}}), DomainError);
  CHECK_THROWS_AS(evalObservable(ObservableId::combo(1, NAN, 0), {1, 0, 1, 1}, ModelSpec::free()),
                  InvalidObservable);
}

TEST_CASE("property: closed-form gradients match central differences") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> du(0.3, 4.0), dv(-3.0, 3.0), dp(-2.0, 2.0);
  for (const auto& m : allModels()) {
    for (const auto& o : conservedObservables(m)) {
      for (int i = 0; i < 50; ++i) {
        PhasePointd p{du(rng), dv(rng), dp(rng), dp(rng)};
        if (std::abs(p.v) < 0.1) p.v += 0.5;
        const Gradient4 g = gradObservable(o, p, m), f = fdGradient(o, p, m);
        const double scale = 1.0 + g.cwiseAbs().maxCoeff();
        CHECK((g - f).cwiseAbs().maxCoeff() / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("property: functional relations hold pointwise") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> du(0.2, 5.0), dv(-5.0, 5.0), dp(-3.0, 3.0);
  const auto free = ModelSpec::free();
  const auto p3 = ModelSpec::p3(-0.9);
  for (int i = 0; i < 500; ++i) {
    const PhasePointd p{du(rng), dv(rng), dp(rng), dp(rng)};
    const double h = evalHamiltonian(p, free), x1 = evalObservable(obs::X1, p, free),
                 x2 = evalObservable(obs::X2, p, free), k = p.pv;
    CHECK(std::abs(4 * h * x2 + x1 * x1 + k * k * k * k) <= 1e-12 * (1 + x1 * x1 + k * k * k * k));
    const double hp = evalHamiltonian(p, p3), r1 = evalObservable(obs::R1, p, p3),
                 r2 = evalObservable(obs::R2, p, p3);
    const double terms[] = {4 * hp * r2, r1 * r1, k * k * k * k, 4 * -0.9 * k * k};
    double scale = 1.0;
    for (double t : terms) scale = std::max(scale, std::abs(t));
    CHECK(std::abs(terms[0] + terms[1] + terms[2] + terms[3]) <= 1e-12 * scale);
  }
}

TEST_CASE("property: free quadratic integrals are degree-2 homogeneous in momenta") {
  const auto free = ModelSpec::free();
  const PhasePointd p{1.3, -0.4, 0.8, -1.1};
  for (double s : {0.5, 2.0, -3.0}) {
    const PhasePointd q{p.u, p.v, s * p.pu, s * p.pv};
    for (const auto& o : {obs::X1, obs::X2, ObservableId::combo(0, 0, 1)})
      CHECK(evalObservable(o, q, free) == doctest::Approx(s * s * evalObservable(o, p, free)).epsilon(1e-14));
  }
}

TEST_CASE("jet evaluation of observables agrees with the double path") {
  using J = Jet<double, 4>;
  const PhasePointd p{1.7, 0.9, -0.6, 1.2};
  const auto m = ModelSpec::p1(0.4, 0.2, -0.3);
  const PhasePoint<J> z{J::variable(p.u, 0, 2), J::variable(p.v, 1, 2), J::variable(p.pu, 2, 2),
                        J::variable(p.pv, 3, 2)};
  for (const auto& o : conservedObservables(m)) {
    const J j = observableValue(o, z, m);
    CHECK(j.value() == doctest::Approx(evalObservable(o, p, m)).epsilon(1e-14));
    const Gradient4 g = gradObservable(o, p, m);
    CHECK(j.coeff({1, 0, 0, 0}) == doctest::Approx(g[0]).epsilon(1e-12));
    CHECK(j.coeff({0, 1, 0, 0}) == doctest::Approx(g[1]).epsilon(1e-12));
  }
}
