#include "darboux/charts.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace darboux {

Chart Chart::rotatedTheta(double theta) {
  if (!std::isfinite(theta)) throw DomainError("non-finite chart angle");
  const double s = std::sin(theta);
  return {Kind::RotatedRS, theta, s == 0.0 ? 0.0 : -std::cos(theta) / s, 0.0};
}

Chart Chart::rotatedC(double C) {
  if (!(C > 0.0) || !std::isfinite(C)) throw DomainError("case-1 parameter C = exp(-c) must be positive");
  Chart c{Kind::RotatedRS, std::atan(-1.0 / C), C, 0.0};
  if (std::abs(std::tan(c.theta) * c.C + 1.0) > 1e-12) throw DomainError("inconsistent (theta, C) pair");
  return c;
}

Chart Chart::parabolic(double a) {
  if (!std::isfinite(a)) throw DomainError("non-finite parabolic shift");
  return {Kind::ParabolicXiEta, 0.0, 0.0, a};
}

std::string Chart::name() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::NativeUV:
      return "native";
    case Kind::RotatedRS:
      os << "rotated(theta=" << theta << ")";
      return os.str();
    case Kind::ParabolicXiEta:
      os << "parabolic(a=" << a << ")";
      return os.str();
  }
  return "?";
}

Eigen::Matrix2d chartJacobian(const Chart& c, double x, double y) {
  Eigen::Matrix2d j;
  switch (c.kind) {
    case Chart::Kind::NativeUV:
      j.setIdentity();
      break;
    case Chart::Kind::RotatedRS: {
      const double ct = std::cos(c.theta), st = std::sin(c.theta);
      j << ct, st, -st, ct;
      break;
    }
    case Chart::Kind::ParabolicXiEta:
      j << x, -y, y, x;
      break;
  }
  return j;
}

ChartPoint toChart(const Chart& c, const PhasePointd& p) {
  double x = p.u, y = p.v;
  switch (c.kind) {
    case Chart::Kind::NativeUV:
      return {p.u, p.v, p.pu, p.pv};
    case Chart::Kind::RotatedRS: {
      const double ct = std::cos(c.theta), st = std::sin(c.theta);
      x = p.u * ct - p.v * st;
      y = p.u * st + p.v * ct;
      break;
    }
    case Chart::Kind::ParabolicXiEta: {
      // xi^2 - eta^2 = d, xi eta = v; branch xi >= 0, eta carries sign(v).
      const double d = 2.0 * (p.u - c.a);
      const double root = std::hypot(d, 2.0 * p.v);
      if (root == 0.0) throw ChartSingular("xi = eta = 0 is singular in the parabolic chart");
      double xi2, eta2;
      if (d >= 0.0) {
        xi2 = 0.5 * (d + root);
        eta2 = p.v * p.v / xi2;
      } else {
        eta2 = 0.5 * (root - d);
        xi2 = p.v * p.v / eta2;
      }
      x = std::sqrt(xi2);
      y = std::sqrt(eta2);
      if (p.v < 0.0) y = -y;
      break;
    }
  }
  const Eigen::Vector2d pc = chartJacobian(c, x, y).transpose() * Eigen::Vector2d(p.pu, p.pv);
  return {x, y, pc[0], pc[1]};
}

PhasePointd fromChart(const Chart& c, const ChartPoint& q) {
  if (c.kind == Chart::Kind::ParabolicXiEta && q.x == 0.0 && q.y == 0.0)
    throw ChartSingular("xi = eta = 0 is singular in the parabolic chart");
  return chartToNative(c, q.x, q.y, q.px, q.py);
}

ChartPoint toCase1CForm(double C, const PhasePointd& p) {
  if (!(C > 0.0)) throw DomainError("case-1 parameter C must be positive");
  // d(r, s)/d(u, v); momenta transform with its inverse transpose.
  Eigen::Matrix2d j;
  j << -2.0 * C, -2.0, 2.0 / C, -2.0;
  const Eigen::Vector2d pc = j.transpose().inverse() * Eigen::Vector2d(p.pu, p.pv);
  return {-2.0 * (C * p.u + p.v), 2.0 / C * (p.u - C * p.v), pc[0], pc[1]};
}

Case1Values case1CFormValues(double C, const ChartPoint& q) {
  const double r = q.x, s = q.y;
  if (s == r) throw ChartSingular("s = r in the case-1 chart");
  const double f = 2.0 * (C * C + 1.0) * (C * C + 1.0) / (C * (s - r));
  return {f * (q.py * q.py / (C * C) + q.px * q.px), f * (r * q.py * q.py / (C * C) + s * q.px * q.px)};
}

QuadraticCoeffs case1Coeffs(double C) {
  if (!(C > 0.0)) throw DomainError("case-1 parameter C must be positive");
  return {1.0, 0.0, 0.5 * (1.0 / C - C)};
}

Case2Values case2Values(double a, const ChartPoint& q) {
  const double xi2 = q.x * q.x, eta2 = q.y * q.y;
  const double den = 2.0 * (xi2 + eta2) * (xi2 - eta2 + 2.0 * a);
  if (den == 0.0) throw ChartSingular("vanishing case-2 denominator");
  return {(q.px * q.px + q.py * q.py) / den,
          (eta2 * (2.0 * a - eta2) * q.px * q.px - xi2 * (xi2 + 2.0 * a) * q.py * q.py) / den};
}

CharRoots charRoots(const QuadraticCoeffs& c, double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v)) throw DomainError("non-finite point");
  const IntegralClass kind = classifyIntegral(c);
  Eigen::Matrix2d m;
  m << -2.0 * c.a * v - c.b * v * v, 2.0 * c.a * u + 2.0 * c.b * u * v,
      2.0 * c.a * u + 2.0 * c.b * u * v, -2.0 * c.a * v - c.b * (4.0 * u * u + v * v) + 4.0 * c.c * u;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues()[0], hi = es.eigenvalues()[1];
  if (hi - lo <= 1e-14 * (1.0 + std::abs(hi) + std::abs(lo))) throw DegenerateRoots("coincident characteristic roots");
  if (kind == IntegralClass::X2type) return {hi, lo};
  return {lo, hi};
}

double LiouvilleForm::hamiltonian(const ChartPoint& q) const {
  const double den = sigma(q.x) + tau(q.y);
  if (den == 0.0) throw ChartSingular("vanishing Liouville denominator");
  return (q.px * q.px + q.py * q.py + f(q.x) + g(q.y)) / den;
}

bool separates(const Chart& c, const ModelSpec& m) {
  switch (m.potential) {
    case Potential::Free:
    case Potential::P3:
      return true;
    case Potential::P1:
      return c.kind != Chart::Kind::RotatedRS;
    case Potential::P2:
      return c.kind != Chart::Kind::ParabolicXiEta;
  }
  return false;
}

LiouvilleForm liouvilleForm(const Chart& c, const ModelSpec& m) {
  m.validate();
  if (!separates(c, m)) throw IncompatibleChart(c.name() + " does not separate model " + m.name());
  const auto zero = [](double) { return 0.0; };
  const std::vector<double> k = m.params;
  switch (c.kind) {
    case Chart::Kind::NativeUV: {
      LiouvilleForm lf{[](double u) { return 4.0 * u; }, zero, zero, zero};
      switch (m.potential) {
        case Potential::Free:
          break;
        case Potential::P1:
          lf.f = [k](double u) { return 4.0 * k[0] * u * u + 4.0 * k[1]; };
          lf.g = [k](double v) { return k[0] * v * v + (k[2] == 0.0 ? 0.0 : 4.0 * k[2] / (v * v)); };
          break;
        case Potential::P2:
          lf.f = [k](double u) { return 4.0 * k[0] + 4.0 * k[2] * u * u; };
          lf.g = [k](double v) { return 4.0 * k[1] * v + 4.0 * k[2] * v * v; };
          break;
        case Potential::P3:
          lf.f = [k](double) { return 4.0 * k[0]; };
          break;
      }
      return lf;
    }
    case Chart::Kind::RotatedRS: {
      const double ct = std::cos(c.theta), st = std::sin(c.theta);
      LiouvilleForm lf{[ct](double r) { return 4.0 * r * ct; }, [st](double s) { return 4.0 * s * st; }, zero, zero};
      if (m.potential == Potential::P2) {
        lf.f = [k, st](double r) { return 4.0 * k[0] - 4.0 * k[1] * r * st + 4.0 * k[2] * r * r; };
        lf.g = [k, ct](double s) { return 4.0 * k[1] * s * ct + 4.0 * k[2] * s * s; };
      } else if (m.potential == Potential::P3) {
        lf.f = [k](double) { return 4.0 * k[0]; };
      }
      return lf;
    }
    case Chart::Kind::ParabolicXiEta: {
      const double a = c.a;
      LiouvilleForm lf{[a](double xi) { return 2.0 * std::pow(xi, 4) + 4.0 * a * xi * xi; },
                       [a](double eta) { return -2.0 * std::pow(eta, 4) + 4.0 * a * eta * eta; }, zero, zero};
      if (m.potential == Potential::P1) {
        lf.f = [k, a](double xi) {
          const double x2 = xi * xi;
          double r = k[0] * (x2 * x2 * x2 + 4.0 * a * x2 * x2 + 4.0 * a * a * x2) + 4.0 * k[1] * x2;
          if (k[2] != 0.0) r += 4.0 * k[2] / x2;
          return r;
        };
        lf.g = [k, a](double eta) {
          const double e2 = eta * eta;
          double r = k[0] * (e2 * e2 * e2 - 4.0 * a * e2 * e2 + 4.0 * a * a * e2) + 4.0 * k[1] * e2;
          if (k[2] != 0.0) r += 4.0 * k[2] / e2;
          return r;
        };
      } else if (m.potential == Potential::P3) {
        lf.f = [k](double xi) { return 4.0 * k[0] * xi * xi; };
        lf.g = [k](double eta) { return 4.0 * k[0] * eta * eta; };
      }
      return lf;
    }
  }
  throw IncompatibleChart("unknown chart");
}

double liouvilleCheck(const Chart& c, const ModelSpec& m, const PhasePointd& p) {
  const LiouvilleForm lf = liouvilleForm(c, m);
  const double h = evalHamiltonian(p, m);
  return std::abs(h - lf.hamiltonian(toChart(c, p)));
}

double flattenedLevelSet(const ModelSpec& m, const PhasePointd& p, double E) {
  if (m.potential == Potential::Free) throw ModelMismatch("flattened equations need a potential");
  m.validate();
  checkDomain(p, m);
  const double u = p.u, v = p.v, kin = p.pu * p.pu + p.pv * p.pv;
  const auto& k = m.params;
  switch (m.potential) {
    case Potential::P1: {
      double r = kin + k[0] * (4.0 * u * u + v * v) + 4.0 * k[1] - 4.0 * E * u;
      if (k[2] != 0.0) r += 4.0 * k[2] / (v * v);
      return r;
    }
    case Potential::P2:
      return kin + 4.0 * k[2] * (u * u + v * v) + 4.0 * k[0] + 4.0 * k[1] * v - 4.0 * E * u;
    case Potential::P3:
      return kin - 4.0 * E * u + 4.0 * k[0];
    case Potential::Free:
      break;
  }
  return 0.0;
}

}  // namespace darboux
