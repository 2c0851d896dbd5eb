#include <cmath>
#include <random>

#include "darboux/brackets.hpp"
#include "doctest.h"

using namespace darboux;

namespace {

ModelSpec modelFor(Potential p) {
  switch (p) {
    case Potential::Free:
      return ModelSpec::free();
    case Potential::P1:
      return ModelSpec::p1(0.7, -0.4, 0.3);
    case Potential::P2:
      return ModelSpec::p2(0.5, -0.8, 0.6);
    case Potential::P3:
      return ModelSpec::p3(1.3);
  }
  return ModelSpec::free();
}

}  // namespace

TEST_CASE("bracket values at hand-computed points") {
  const auto free = ModelSpec::free();
  CHECK(poissonBracket(obs::K, obs::H, {1.4, -0.3, 0.2, 0.9}, free) == 0.0);
  CHECK(poissonBracket(obs::K, obs::X1, {1, 0, 1, 1}, free) == doctest::Approx(1.0));
  CHECK(poissonBracket(obs::X1, obs::X2, {1, 0, 1, 1}, free) == doctest::Approx(2.0));
  CHECK(std::abs(fdBracketOracle(obs::K, obs::X1, {1, 0, 1, 1}, free, 1e-4) - 1.0) < 1e-7);
  CHECK(std::abs(fdBracketOracle(obs::X1, obs::K, {1, 0, 1, 1}, free, 1e-4) + 1.0) < 1e-7);
  CHECK(std::abs(fdBracketOracle(obs::H, obs::H, {1.2, 0.5, -0.3, 0.8}, free, 1e-4)) < 1e-12);
  CHECK_THROWS_AS(fdBracketOracle(obs::H, obs::K, {1e-5, 0, 1, 1}, free, 1e-4), DomainError);
  CHECK_THROWS_AS(fdBracketOracle(obs::H, obs::K, {1, 0, 1, 1}, free, 0.0), DomainError);
}

TEST_CASE("nested bracket R at hand-computed points") {
  const auto m = ModelSpec::p2(1, 0, 0);
  CHECK(nestedBracketR({1, 0, 1, 1}, m) == doctest::Approx(-6.0));
  // Cubic relation with a2 = a3 = 0: R^2 = 16 H^2 R2 - 64 a1 a2^2 = 16 * 2.25 * 1.
  CHECK(nestedBracketR({1, 0, 1, 1}, m) * nestedBracketR({1, 0, 1, 1}, m) == doctest::Approx(36.0));
  CHECK(nestedBracketR({1, 0, 0, 0}, m) == 0.0);
  CHECK_THROWS_AS(nestedBracketR({1, 0, 1, 1}, ModelSpec::p3(1)), ModelMismatch);
}

TEST_CASE("relation residuals at hand-computed points") {
  CHECK(verifyRelation(RelationId::Free_Casimir, {2, 1, 0, 2}, ModelSpec::free()).relative() < 1e-12);
  CHECK(verifyRelation(RelationId::P3_Casimir, {2, 1, 0, 2}, ModelSpec::p3(1)).relative() < 1e-12);
  CHECK_THROWS_AS(verifyRelation(RelationId::P1_RR1, {1, 1, 1, 1}, ModelSpec::p2(1, 1, 1)), ModelMismatch);
}

TEST_CASE("property: all fourteen relations hold on the seeded sample") {
  for (RelationId r : kAllRelations) {
    const ModelSpec m = modelFor(relationPotential(r));
    const auto pts = samplePhasePoints(1000, 42, m);
    const SweepSummary s = sweepRelation(r, m, pts, 1e-9);
    INFO(relationName(r), " max relative ", s.maxRelative);
    CHECK(s.passed);
  }
  CHECK(relationsFor(Potential::Free).size() == 4);
  CHECK(relationsFor(Potential::P1).size() == 3);
}

TEST_CASE("property: integrals commute with H and brackets are antisymmetric") {
  for (Potential pot : {Potential::Free, Potential::P1, Potential::P2, Potential::P3}) {
    const ModelSpec m = modelFor(pot);
    const auto pts = samplePhasePoints(1000, 42, m);
    const auto ints = conservedObservables(m);
    for (const auto& p : pts) {
      const Gradient4 gh = gradObservable(obs::H, p, m);
      for (const auto& o : ints) {
        const Gradient4 go = gradObservable(o, p, m);
        const double scale = 1.0 + gh.cwiseAbs().maxCoeff() * go.cwiseAbs().maxCoeff();
        CHECK(std::abs(poissonBracket(go, gh)) <= 1e-10 * scale);
      }
      for (const auto& f : ints)
        for (const auto& g : ints) CHECK(poissonBracket(f, g, p, m) == -poissonBracket(g, f, p, m));
    }
  }
}

TEST_CASE("property: closed-form brackets agree with the finite-difference oracle") {
  for (Potential pot : {Potential::Free, Potential::P1, Potential::P2, Potential::P3}) {
    const ModelSpec m = modelFor(pot);
    const auto ints = conservedObservables(m);
    for (const auto& p : samplePhasePoints(200, 5, m)) {
      if (pot == Potential::P1 && std::abs(p.v) < 0.05) continue;
      for (const auto& f : ints)
        for (const auto& g : ints) {
          const double exact = poissonBracket(f, g, p, m), fd = fdBracketOracle(f, g, p, m, 1e-5);
          const double scale = 1.0 + gradObservable(f, p, m).norm() * gradObservable(g, p, m).norm();
          CHECK(std::abs(exact - fd) <= 1e-6 * scale);
        }
    }
  }
}

TEST_CASE("Jacobi identity via nested jets") {
  const ModelSpec m = ModelSpec::free();
  for (const auto& p : samplePhasePoints(50, 3, m)) {
    const auto z = phaseJet(p, 2);
    const PhaseJet k = observableValue(obs::K, z, m), x1 = observableValue(obs::X1, z, m),
                   x2 = observableValue(obs::X2, z, m);
    const double j = poissonBracket(k.truncated(1), poissonBracket(x1, x2)).value() +
                     poissonBracket(x1.truncated(1), poissonBracket(x2, k)).value() +
                     poissonBracket(x2.truncated(1), poissonBracket(k, x1)).value();
    CHECK(std::abs(j) < 1e-9 * (1 + std::abs(x2.value()) * std::abs(x1.value())));
  }
}

TEST_CASE("adjoint orbits and classification") {
  CHECK(adjointTransform({3, 1, 0}, 3) == QuadraticCoeffs{0, 1, 0});
  CHECK(adjointTransform({1, 0, 0}, 17.5) == QuadraticCoeffs{1, 0, 0});
  CHECK(adjointTransform({0, 0, 5}, 2) == QuadraticCoeffs{0, 0, 5});
  CHECK(classifyIntegral({0, 0, 1}) == IntegralClass::K2type);
  CHECK(classifyIntegral({1, 0, 7}) == IntegralClass::X1type);
  CHECK(classifyIntegral({0.3, -2, 1}) == IntegralClass::X2type);
  CHECK_THROWS_AS(classifyIntegral({0, 0, 0}), ZeroObservable);

  const NormalForm nf = normalForm({0.3, -2, 1});
  CHECK(nf.kind == IntegralClass::X2type);
  CHECK(nf.alpha == doctest::Approx(-0.15));
  CHECK(adjointTransform({0.3, -2, 1}, nf.alpha).a == doctest::Approx(0.0));
  CHECK(nf.coeffs.c == doctest::Approx(-0.5));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const QuadraticCoeffs c{d(rng), i % 3 == 0 ? 0.0 : d(rng), d(rng)};
    CHECK(classifyIntegral(adjointTransform(c, d(rng))) == classifyIntegral(c));
  }
}

TEST_CASE("adjoint flow matches the K-flow of the integrals modulo H") {
  // Flowing by K for time alpha shifts v by alpha; X1 and X2 evaluated at the
  // shifted point equal the transformed combination plus a multiple of H.
  const ModelSpec m = ModelSpec::free();
  const PhasePointd p{1.6, 0.4, -0.7, 0.5};
  const double alpha = 0.8;
  const PhasePointd q{p.u, p.v + alpha, p.pu, p.pv};
  const double h = evalHamiltonian(p, m);
  CHECK(evalObservable(obs::X1, q, m) == doctest::Approx(evalObservable(obs::X1, p, m) - 2 * alpha * h));
  CHECK(evalObservable(obs::X2, q, m) ==
        doctest::Approx(evalObservable(obs::X2, p, m) + alpha * evalObservable(obs::X1, p, m) - alpha * alpha * h));
}
