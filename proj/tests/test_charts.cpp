#include <cmath>
#include <numbers>
#include <random>

#include "darboux/brackets.hpp"
#include "darboux/charts.hpp"
#include "doctest.h"

using namespace darboux;

namespace {

double maxDiff(const PhasePointd& a, const PhasePointd& b) {
  return (toVector(a) - toVector(b)).cwiseAbs().maxCoeff();
}

const Chart kCharts[] = {Chart::native(), Chart::rotatedTheta(std::numbers::pi / 4), Chart::rotatedTheta(-0.6),
                         Chart::rotatedC(1.7), Chart::parabolic(0.0), Chart::parabolic(0.8)};

}  // namespace

TEST_CASE("chart examples") {
  const PhasePointd p{1.3, -0.2, 0.4, 0.9};
  const ChartPoint n = toChart(Chart::native(), p);
  CHECK((n.x == p.u && n.y == p.v && n.px == p.pu && n.py == p.pv));

  const ChartPoint q = toChart(Chart::rotatedTheta(std::numbers::pi / 2), {1, 0, 0, 0});
  CHECK(std::abs(q.x) < 1e-15);
  CHECK(q.y == doctest::Approx(1.0));
  const PhasePointd back = fromChart(Chart::rotatedTheta(std::numbers::pi / 2), {0, 1, 0, 0});
  CHECK(back.u == doctest::Approx(1.0));

  const PhasePointd w = fromChart(Chart::parabolic(0.0), {2, 1, 0, 0});
  CHECK(w.u == doctest::Approx(1.5));
  CHECK(w.v == doctest::Approx(2.0));
  CHECK_THROWS_AS(toChart(Chart::parabolic(1.0), {1.0, 0.0, 1, 1}), ChartSingular);
  CHECK_THROWS_AS(fromChart(Chart::parabolic(1.0), {0, 0, 1, 1}), ChartSingular);
}

TEST_CASE("theta and C presentations of case 1 are consistent") {
  for (double C : {0.3, 1.0, 2.5}) {
    const Chart c = Chart::rotatedC(C);
    CHECK(std::tan(c.theta) * C == doctest::Approx(-1.0));
    const Chart t = Chart::rotatedTheta(c.theta);
    CHECK(t.C == doctest::Approx(C));
    const PhasePointd p{1.4, 0.6, -0.5, 0.8};
    const ChartPoint rt = toChart(c, p), rc = toCase1CForm(C, p);
    const double ct = std::cos(c.theta);
    CHECK(rt.x == doctest::Approx(-ct / (2 * C) * rc.x));
    CHECK(rt.y == doctest::Approx(-ct / 2 * rc.y));
  }
  CHECK_THROWS_AS(Chart::rotatedC(0.0), DomainError);
}

TEST_CASE("property: round trips and branch choice") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> du(0.2, 5.0), dv(-5.0, 5.0), dp(-3.0, 3.0);
  for (const Chart& c : kCharts) {
    for (int i = 0; i < 300; ++i) {
      const PhasePointd p{du(rng), dv(rng), dp(rng), dp(rng)};
      const ChartPoint q = toChart(c, p);
      CHECK(maxDiff(fromChart(c, q), p) <= 1e-12 * (1 + toVector(p).cwiseAbs().maxCoeff()));
      if (c.kind == Chart::Kind::ParabolicXiEta) {
        CHECK(q.x >= 0.0);
        CHECK(q.y * p.v >= 0.0);
      }
    }
  }
  const ChartPoint z = toChart(Chart::parabolic(2.0), {1.0, 0.0, 0.0, 0.0});
  CHECK(z.x == 0.0);
  CHECK(z.y > 0.0);
}

TEST_CASE("property: charts are canonical") {
  using J = Jet<double, 4>;
  const ModelSpec m = ModelSpec::free();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> du(0.3, 4.0), dv(-3.0, 3.0), dp(-2.0, 2.0);
  for (const Chart& c : kCharts) {
    for (int i = 0; i < 100; ++i) {
      const PhasePointd p{du(rng), dv(rng), dp(rng), dp(rng)};
      const ChartPoint q = toChart(c, p);
      const auto z = chartToNative(c, J::variable(q.x, 0, 1), J::variable(q.y, 1, 1), J::variable(q.px, 2, 1),
                                   J::variable(q.py, 3, 1));
      const J x1 = observableValue(obs::X1, z, m), x2 = observableValue(obs::X2, z, m);
      const double chartBracket = poissonBracket(x1, x2).value();
      const double native = poissonBracket(obs::X1, obs::X2, p, m);
      CHECK(std::abs(chartBracket - native) <= 1e-9 * (1 + std::abs(native)));
    }
  }
}

TEST_CASE("characteristic roots") {
  const CharRoots r = charRoots(case1Coeffs(1.0), 1.0, 0.0);
  CHECK(r.rho1 == doctest::Approx(-2.0));
  CHECK(r.rho2 == doctest::Approx(2.0));
  CHECK_THROWS_AS(charRoots(case1Coeffs(1.0), 0.0, 0.0), DegenerateRoots);

  // Case 2, a = 1 at (xi, eta) = (1, 1), i.e. (u, v) = (1, 1).
  const CharRoots r2 = charRoots({0, 1, 1}, 1.0, 1.0);
  CHECK(r2.rho1 == doctest::Approx(1.0));
  CHECK(r2.rho2 == doctest::Approx(-3.0));

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> du(0.2, 5.0), dv(-5.0, 5.0), dp(-3.0, 3.0), dc(0.2, 3.0), da(-2, 2);
  for (int i = 0; i < 200; ++i) {
    const double C = dc(rng), u = du(rng), v = dv(rng);
    const CharRoots c1 = charRoots(case1Coeffs(C), u, v);
    CHECK(c1.rho1 == doctest::Approx(-2 * (C * u + v)).epsilon(1e-12));
    CHECK(c1.rho2 == doctest::Approx(2 / C * (u - C * v)).epsilon(1e-12));

    const double a = da(rng);
    const ChartPoint q = toChart(Chart::parabolic(a), {u, v, 0, 0});
    const CharRoots c2 = charRoots({0, 1, a}, u, v);
    const double xi2 = q.x * q.x, eta2 = q.y * q.y;
    CHECK(c2.rho1 == doctest::Approx(eta2 * (2 * a - eta2)).epsilon(1e-10));
    CHECK(c2.rho2 == doctest::Approx(-xi2 * (2 * a + xi2)).epsilon(1e-10));
  }
}

TEST_CASE("property: case-1 and case-2 closed forms reproduce H and L") {
  const ModelSpec m = ModelSpec::free();
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> du(0.2, 5.0), dv(-5.0, 5.0), dp(-3.0, 3.0), dc(0.2, 3.0), da(-2, 2);
  for (int i = 0; i < 300; ++i) {
    const PhasePointd p{du(rng), dv(rng), dp(rng), dp(rng)};
    const double h = evalHamiltonian(p, m);
    const double C = dc(rng);
    // The roots themselves are the case-1 coordinates.
    const ChartPoint q1 = toCase1CForm(C, p);
    const CharRoots roots = charRoots(case1Coeffs(C), p.u, p.v);
    CHECK(q1.x == doctest::Approx(roots.rho1).epsilon(1e-12));
    CHECK(q1.y == doctest::Approx(roots.rho2).epsilon(1e-12));
    const Case1Values v1 = case1CFormValues(C, q1);
    CHECK(v1.H == doctest::Approx(h).epsilon(1e-11));
    const QuadraticCoeffs k1 = case1Coeffs(C);
    const double l1 = evalObservable(ObservableId::combo(k1.a, k1.b, k1.c), p, m);
    CHECK(v1.L == doctest::Approx(l1).epsilon(1e-10).scale(1 + std::abs(h)));

    const double a = da(rng);
    const ChartPoint q2 = toChart(Chart::parabolic(a), p);
    const Case2Values v2 = case2Values(a, q2);
    CHECK(v2.H == doctest::Approx(h).epsilon(1e-11));
    const double l2 = evalObservable(ObservableId::combo(0, 1, a), p, m);
    CHECK(v2.L == doctest::Approx(l2).epsilon(1e-10).scale(1 + std::abs(h)));
  }
}

TEST_CASE("property: Liouville forms reproduce H for every compatible chart") {
  const ModelSpec models[] = {ModelSpec::free(), ModelSpec::p1(0.7, -0.4, 0.3), ModelSpec::p2(0.5, -0.8, 0.6),
                              ModelSpec::p3(1.3)};
  for (const auto& m : models) {
    const auto pts = samplePhasePoints(1000, 42, m);
    for (const Chart& c : kCharts) {
      if (!separates(c, m)) {
        CHECK_THROWS_AS(liouvilleCheck(c, m, pts[0]), IncompatibleChart);
        continue;
      }
      double worst = 0.0;
      for (const auto& p : pts) {
        if (c.kind == Chart::Kind::ParabolicXiEta && std::hypot(p.u - c.a, p.v) < 1e-3) continue;
        worst = std::max(worst, liouvilleCheck(c, m, p) / (1 + std::abs(evalHamiltonian(p, m))));
      }
      INFO(m.name(), " ", c.name());
      CHECK(worst <= 1e-10);
    }
  }
  CHECK_THROWS_AS(liouvilleForm(Chart::rotatedTheta(0.3), ModelSpec::p1(1, 1, 1)), IncompatibleChart);
  CHECK_THROWS_AS(liouvilleForm(Chart::parabolic(0.0), ModelSpec::p2(1, 1, 1)), IncompatibleChart);
}

TEST_CASE("flattened level sets") {
  CHECK(flattenedLevelSet(ModelSpec::p3(1.0), {1, 0, 1, 1}, 1.5) == doctest::Approx(0.0));
  const auto p1 = ModelSpec::p1(0.7, -0.4, 0.3);
  for (const auto& p : samplePhasePoints(200, 42, p1)) {
    const double h = evalHamiltonian(p, p1);
    const double r = flattenedLevelSet(p1, p, h);
    CHECK(std::abs(r) <= 1e-12 * (1 + 4 * p.u * std::abs(h) + p.pu * p.pu + p.pv * p.pv + 4 * 0.3 / (p.v * p.v)));
    CHECK(flattenedLevelSet(p1, p, h - 0.5) > 0.0);
    CHECK(flattenedLevelSet(p1, p, h + 0.5) < 0.0);
  }
  const auto p2 = ModelSpec::p2(0.5, -0.8, 0.6);
  const PhasePointd p{1.4, 0.3, 0.2, -0.7};
  CHECK(flattenedLevelSet(p2, p, 2.0) == doctest::Approx(4 * p.u * (evalHamiltonian(p, p2) - 2.0)));
  CHECK_THROWS_AS(flattenedLevelSet(ModelSpec::free(), p, 1.0), ModelMismatch);
}
