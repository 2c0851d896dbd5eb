#pragma once

// Special functions on the real line: Bessel J_nu, Kummer 1F1, parabolic
// cylinder D_nu, the incomplete elliptic integral F(phi, k) and a Wronskian.
// Each *Taylor function returns normalized Taylor coefficients
// f^(k)(x)/k!, k = 0..order, for composition with jets.

#include <functional>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux {

struct SpecialValue {
  double value = 0.0;
  double errorEstimate = 0.0;  // forward estimate of the absolute error
};

/// Crossover between the power series and the Hankel expansion.
inline constexpr double kBesselSeriesLimit = 20.0;

/// J_nu(x) for nu in [-5, 5] and x >= 0. Throws UnsupportedOrder outside the
/// order range and RangeError for x < 0 (or x = 0 with a singular order).
SpecialValue besselJ(double nu, double x);
SpecialValue besselJSeries(double nu, double x);
SpecialValue besselJAsymptotic(double nu, double x);
std::vector<double> besselJTaylor(double nu, double x, int order);

/// 1F1(a; b; z) for |z| <= 200. Throws PoleInB when b is a nonpositive
/// integer.
SpecialValue kummer1F1(double a, double b, double z);
std::vector<double> kummer1F1Taylor(double a, double b, double z, int order);

/// D_nu(z) for |nu| <= 60 and |z| <= 60. Uses the two-term 1F1
/// representation where it is well conditioned and continues the Weber
/// equation D'' = (z^2/4 - nu - 1/2) D with Taylor steps elsewhere.
SpecialValue parabolicD(double nu, double z);
/// D_nu(z) and D_nu'(z) together.
struct ValueAndDerivative {
  double value;
  double derivative;
};
ValueAndDerivative parabolicDWithDerivative(double nu, double z);
std::vector<double> parabolicDTaylor(double nu, double z, int order);
/// The two-term 1F1 representation alone, without conditioning checks.
SpecialValue parabolicDKummer(double nu, double z);

/// Carlson's symmetric integral R_F(x, y, z).
double carlsonRF(double x, double y, double z);
/// F(phi, k) = int_0^phi dt / sqrt(1 - k^2 sin^2 t). Throws DomainError when
/// |k sin(phi)| >= 1 or the path crosses a singularity.
SpecialValue ellipticF(double phi, double k);

/// f g' - f' g at x with fourth-order central differences of step h.
double wronskian(const std::function<double(double)>& f, const std::function<double(double)>& g, double x,
                 double h);

}  // namespace darboux
