#pragma once

// The three separable coordinate systems of the free D1 Hamiltonian, the
// characteristic roots of quadratic integrals, and Liouville-form checks.

#include <Eigen/Core>
#include <functional>

#include "darboux/brackets.hpp"
#include "darboux/phase.hpp"

namespace darboux {

/// NativeUV: (u, v) itself.
/// RotatedRS: u = r cos(theta) + s sin(theta), v = -r sin(theta) + s cos(theta).
///   The companion C-form r_C = -2(Cu + v), s_C = (2/C)(u - Cv) is the same
///   chart up to scaling when tan(theta) = -1/C.
/// ParabolicXiEta: u = (xi^2 - eta^2)/2 + a, v = xi eta.
struct Chart {
  enum class Kind { NativeUV, RotatedRS, ParabolicXiEta };
  Kind kind = Kind::NativeUV;
  double theta = 0.0;
  double C = 0.0;
  double a = 0.0;

  static Chart native() { return {}; }
  static Chart rotatedTheta(double theta);
  static Chart rotatedC(double C);
  static Chart parabolic(double a);
  std::string name() const;
};

/// Chart coordinates and conjugate momenta: (r, s, pr, ps), (xi, eta, pxi,
/// peta) or (u, v, pu, pv).
struct ChartPoint {
  double x = 0.0;
  double y = 0.0;
  double px = 0.0;
  double py = 0.0;
};

/// d(u, v)/d(x, y) at chart coordinates (x, y).
Eigen::Matrix2d chartJacobian(const Chart& c, double x, double y);
/// Coordinates mapped, momenta pulled back with the Jacobian transpose.
/// Throws ChartSingular at xi = eta = 0.
ChartPoint toChart(const Chart& c, const PhasePointd& p);
PhasePointd fromChart(const Chart& c, const ChartPoint& q);

/// fromChart on any scalar (jets included), so chart-space derivatives of
/// native observables are available.
template <typename Scalar>
PhasePoint<Scalar> chartToNative(const Chart& c, const Scalar& x, const Scalar& y, const Scalar& px,
                                 const Scalar& py) {
  switch (c.kind) {
    case Chart::Kind::RotatedRS: {
      const double ct = std::cos(c.theta), st = std::sin(c.theta);
      return {x * ct + y * st, -x * st + y * ct, px * ct + py * st, -px * st + py * ct};
    }
    case Chart::Kind::ParabolicXiEta: {
      const Scalar r2 = x * x + y * y;
      return {0.5 * (x * x - y * y) + c.a, x * y, (x * px - y * py) / r2, (y * px + x * py) / r2};
    }
    case Chart::Kind::NativeUV:
      break;
  }
  return {x, y, px, py};
}

/// Case-1 coordinates in the C-form: (r, s) = (-2(Cu + v), (2/C)(u - Cv)) and
/// the conjugate momenta.
ChartPoint toCase1CForm(double C, const PhasePointd& p);
/// H = 2(C^2+1)^2/(C(s-r)) (ps^2/C^2 + pr^2) and
/// L = 2(C^2+1)^2/(C(s-r)) (r ps^2/C^2 + s pr^2).
struct Case1Values {
  double H;
  double L;
};
Case1Values case1CFormValues(double C, const ChartPoint& q);
/// Coefficients of L = X1 + sinh(c) K^2 with C = exp(-c).
QuadraticCoeffs case1Coeffs(double C);

/// Case-2 values: H = (pxi^2 + peta^2)/(2(xi^2+eta^2)(xi^2-eta^2+2a)) and
/// L = (eta^2(2a-eta^2) pxi^2 - xi^2(xi^2+2a) peta^2)/(same denominator).
struct Case2Values {
  double H;
  double L;
};
Case2Values case2Values(double a, const ChartPoint& q);

struct CharRoots {
  double rho1;
  double rho2;
};
/// Roots of |a^{ij} - rho g^{ij}| = 0 for lambda = a X1 + b X2 + c K^2 at
/// (u, v), i.e. the eigenvalues of 4u A where lambda = A^{ij} p_i p_j.
/// Labelled as in the separable charts: X1 type gives rho1 < rho2 (so
/// rho1 = -2(Cu+v)), X2 type gives rho1 > rho2 (rho1 = eta^2(2a - eta^2)).
/// Throws DegenerateRoots when the roots coincide.
CharRoots charRoots(const QuadraticCoeffs& c, double u, double v);

/// Liouville data H = (px^2 + py^2 + f(x) + g(y))/(sigma(x) + tau(y)).
struct LiouvilleForm {
  std::function<double(double)> sigma;
  std::function<double(double)> tau;
  std::function<double(double)> f;
  std::function<double(double)> g;
  double hamiltonian(const ChartPoint& q) const;
};

/// Whether chart c separates the Hamiltonian of model m.
bool separates(const Chart& c, const ModelSpec& m);
/// Throws IncompatibleChart when c does not separate m.
LiouvilleForm liouvilleForm(const Chart& c, const ModelSpec& m);
/// |H native - H from the Liouville form| at p.
double liouvilleCheck(const Chart& c, const ModelSpec& m, const PhasePointd& p);

/// H = E multiplied through by 4u:
/// pu^2 + pv^2 + 4u V(u, v) - 4Eu, equal to 4u (H - E).
double flattenedLevelSet(const ModelSpec& m, const PhasePointd& p, double E);

}  // namespace darboux
