#pragma once

// Separated one-dimensional eigenproblems psi'' + Q(x; p) psi = 0 with Q
// linear in the active parameter p, the Numerov oracle, the special-function
// quantization conditions, and the Hamilton-Jacobi checks of the free actions.

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "darboux/charts.hpp"
#include "darboux/operators.hpp"
#include "darboux/phase.hpp"
#include "darboux/specfun.hpp"

namespace darboux {

struct BoundaryCondition {
  enum class Kind { Dirichlet, Robin, Decay, Periodic, PowerLaw };
  Kind kind = Kind::Dirichlet;
  double a = 1.0;         // Robin: a psi + b psi' = 0
  double b = 0.0;
  double exponent = 0.0;  // PowerLaw: psi ~ x^exponent at a regular singular end

  static BoundaryCondition dirichlet() { return {}; }
  static BoundaryCondition robin(double a, double b) { return {Kind::Robin, a, b, 0.0}; }
  static BoundaryCondition decay() { return {Kind::Decay, 1.0, 0.0, 0.0}; }
  static BoundaryCondition periodic() { return {Kind::Periodic, 1.0, 0.0, 0.0}; }
  static BoundaryCondition powerLaw(double s) { return {Kind::PowerLaw, 1.0, 0.0, s}; }
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// psi'' + (q0(x) + p q1(x)) psi = 0 on [xLo, xHi]; p is scanned over
/// [paramLo, paramHi].
struct SpectralProblem {
  std::string name;
  std::string parameter = "E";
  std::function<double(double)> q0;
  std::function<double(double)> q1;
  double xLo = 0.0;
  double xHi = kInfinity;
  BoundaryCondition lo;
  BoundaryCondition hi = BoundaryCondition::decay();
  double paramLo = 0.0;
  double paramHi = 1.0;

  double Q(double x, double p) const { return q0(x) + p * q1(x); }
};

/// The two separated equations of H Psi = E Psi in a separating chart with
/// Liouville data (sigma, tau, f, g):
///   first:  X'' + (E sigma(x) - f(x) - mu) X = 0, active parameter E;
///   second: Y'' + (E tau(y) - g(y) + mu) Y = 0, active parameter mu.
/// Domains and boundary conditions are left at the chart's natural range
/// and are meant to be adjusted by the caller. Throws IncompatibleChart.
struct SeparatedProblems {
  SpectralProblem first;
  SpectralProblem second;
};
SeparatedProblems deriveSeparated(const ModelSpec& m, const Chart& c, double E, double mu);

struct NumerovOptions {
  double h = 1e-3;
  int scanPanels = 400;
  double tolerance = 1e-13;  // relative bisection width
};

struct EigenLevel {
  int n = 0;
  double value = 0.0;
  int nodes = 0;
  double residual = 0.0;  // final bracket width
};

struct SpectrumResult {
  std::string problem;
  std::string parameter;
  std::vector<EigenLevel> levels;
};

/// Finite integration window: infinite Decay ends are cut where the WKB
/// decay exponent at p = paramHi exceeds 40.
std::pair<double, double> truncatedDomain(const SpectralProblem& prob);

/// n-th eigenvalue by Numerov shooting and bisection on the node count.
/// Periodic problems use the discrete monodromy of the Numerov recurrence.
/// Throws NotBracketed when the scan window does not contain level n and
/// NodeMismatch when the eigenfunction does not have n nodes.
EigenLevel numerovEigen(const SpectralProblem& prob, int n, const NumerovOptions& opt = {});
SpectrumResult numerovSpectrum(const SpectralProblem& prob, int count, const NumerovOptions& opt = {});

/// Trace of the Numerov period map over [x0, x0 + period] (Floquet
/// discriminant; periodic eigenvalues have trace 2).
double floquetTrace(const SpectralProblem& prob, double p, double period, double x0, double h = 1e-3);

/// W[f(x) - f(x + period), g(x) - g(x + period)] at x = x0.
using SolutionFunction = std::function<ValueAndDerivative(double)>;
double periodicWronskianCondition(const SolutionFunction& f, const SolutionFunction& g, double period, double x0);
/// The same condition for a generic problem, with the fundamental pair at
/// x0 integrated by classical Runge-Kutta; a function of the active parameter.
std::function<double(double)> periodicWronskianCondition(const SpectralProblem& prob, double period, double x0);

/// Roots of a scalar function in [lo, hi] located by sign changes on a
/// uniform scan and refined by bisection; returns the first `count` roots.
/// Throws NotBracketed when fewer are found.
std::vector<double> scanRoots(const std::function<double(double)>& f, double lo, double hi, int panels, int count,
                              double tolerance = 1e-13);

// ---- potential 1: b1 = beta^2, b3 = (gamma^2 - 1/4)/4 ----

/// u-problem U'' + (4Eu - 4 beta^2 u^2 - 4 b2 - mu) U = 0 on u > 1/2 with
/// a U + b U' = 0 at u = 1/2 and decay at infinity; active parameter E.
SpectralProblem p1uProblem(double beta, double b2, double mu, double robinA = 1.0, double robinB = 0.0);
/// v-problem V'' + (mu - beta^2 v^2 - (gamma^2 - 1/4)/v^2) V = 0 on
/// (0, 2 pi] with V ~ v^(gamma + 1/2) at 0 and V(2 pi) = 0; active mu.
SpectralProblem p1vProblem(double beta, double gamma);

/// D_nu index of the u-problem: nu = (E^2/beta^2 - 4 b2 - mu)/(4 beta) - 1/2
/// with argument z = 2 sqrt(beta) (u - E/(2 beta^2)).
double p1Index(double beta, double b2, double mu, double E);
/// Condition a D_nu(z(1/2)) + b dD_nu/du(1/2) as a function of E.
double p1uCondition(double beta, double b2, double mu, double E, double robinA = 1.0, double robinB = 0.0);
/// n-th root in E of the D_nu condition.
double quantizeP1u(double beta, double b2, double mu, int n, double robinA = 1.0, double robinB = 0.0);
/// 1F1(1/2 (1 + gamma) - mu/(4 beta), 1 + gamma, 4 beta pi^2) as a function of mu.
double p1vCondition(double beta, double gamma, double mu);
/// n-th root in mu of the 1F1 condition.
double quantizeP1v(double beta, double gamma, int n);

/// beta and gamma of a P1 model; throws SpectrumUnbounded for b1 <= 0 and
/// DomainError for b3 <= 0 (gamma <= 1/2).
struct P1Spectral {
  double beta;
  double gamma;
  double b2;
};
P1Spectral p1Spectral(const ModelSpec& m);

// ---- potential 2: a3 = alpha^2 ----

/// v-problem V'' + (kappa - 4 a2 v - 4 alpha^2 v^2) V = 0, periodic on
/// [w0, w0 + 2 pi]; active kappa.
SpectralProblem p2vProblem(double alpha, double a2, double w0);
/// u-problem U'' + (4Eu - 4 alpha^2 u^2 - 4 a1 - kappa) U = 0 with a
/// Dirichlet wall at u = 1/2; active E.
SpectralProblem p2uProblem(double alpha, double a1, double kappa);

/// nu = (kappa + a2^2/alpha^2)/(4 alpha) - 1/2, z = 2 sqrt(alpha)(v + a2/(2 alpha^2)).
double p2vIndex(double alpha, double a2, double kappa);
/// rho = (E^2/alpha^2 - 4 a1 - kappa)/(4 alpha) - 1/2, z = 2 sqrt(alpha)(u - E/(2 alpha^2)).
double p2uIndex(double alpha, double a1, double kappa, double E);
/// W[V+ - T V+, V- - T V-](w0) for V± = D_nu(±z(v)), T the 2 pi shift.
double p2vWronskianCondition(double alpha, double a2, double kappa, double w0);
/// The same condition divided by W[V+, V-] = 2 sqrt(alpha) sqrt(2 pi)/Gamma(-nu),
/// which removes the zeros at integer nu where V+ and V- are dependent.
double p2vNormalizedCondition(double alpha, double a2, double kappa, double w0);
double quantizeP2v(double alpha, double a2, int n, double w0);
double quantizeP2u(double alpha, double a1, double kappa, int n);

struct P2Levels {
  double kappa;   // n-th periodic v-level
  double energy;  // n-th u-level at the ground v-level
};
/// Throws SpectrumUnbounded for a3 <= 0.
P2Levels quantizeP2(const ModelSpec& m, int n, double w0);

// ---- separated bound states as fields for eigen_residual ----

/// Free solution sqrt(w) J_{1/3}((2/3) sqrt(4E) w^{3/2}) e^{imv} with
/// w = u - m^2/(4E); defined where w > 0.
SmoothField freeBesselState(double E, double m);

/// U(u) V(v) with U = D_nu(2 sqrt(beta)(u - E/(2 beta^2))) and
/// V = v^(gamma + 1/2) exp(-beta v^2/2) 1F1(1/2 (1 + gamma) - mu/(4 beta), 1 + gamma, beta v^2).
SmoothField p1SeparatedState(const P1Spectral& s, double E, double mu);
/// U(u) V(v) with U = D_rho(2 sqrt(alpha)(u - E/(2 alpha^2))) and V the
/// combination d1 D_nu(z) + d2 D_nu(-z) that is periodic on [w0, w0 + 2 pi].
SmoothField p2SeparatedState(double alpha, double a1, double a2, double E, double kappa, double w0);

// ---- large-n law ----

struct AsymptoticCheck {
  int n;
  double energy;     // Numerov E_n of the P1 u-problem
  double predicted;  // 2 sqrt(beta^3 n)
  double ratio;      // |E_n| / predicted
  int sign;          // sign of E_n
};
AsymptoticCheck p1Asymptotic(double beta, double b2, double mu, int n, const NumerovOptions& opt = {});

// ---- Hamilton-Jacobi actions of the free motion ----

/// Case 3: S = (4Eu - k^2)^{3/2}/(6E) + k v. Residual (S_u^2 + S_v^2)/(4u) - E.
double hjResidualNative(double E, double k, double u, double v);
/// Case 1: S = (4Er cos t - lambda)^{3/2}/(6E cos t) + (4Es sin t + lambda)^{3/2}/(6E sin t).
/// Residual (S_r^2 + S_s^2)/(4(r cos t + s sin t)) - E.
double hjResidualRotated(double E, double lambda, double theta, double r, double s);
/// Case 2 with S_xi = sqrt(2E xi^4 + q E c xi^2 - lambda) and
/// S_eta = sqrt(-2E eta^4 + q E c eta^2 + lambda); q = 2 as printed, q = 4
/// from the quantum equations. Residual (S_xi^2 + S_eta^2)/(2(xi^2+eta^2)(xi^2-eta^2+2c)) - E.
double hjResidualParabolic(double E, double c, double lambda, double xi, double eta, double q);

}  // namespace darboux
