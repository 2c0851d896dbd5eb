#include "darboux/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace darboux {

namespace {

using ld = long double;
constexpr ld kLdEps = std::numeric_limits<ld>::epsilon();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Neumaier compensated sum.
struct CompensatedSum {
  ld sum = 0.0L;
  ld comp = 0.0L;
  void add(ld x) {
    const ld t = sum + x;
    if (std::fabs(sum) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  ld value() const { return sum + comp; }
};

bool isNonPositiveInteger(double x) { return x <= 0.0 && x == std::floor(x); }

ld reciprocalGamma(ld x) {
  if (x <= 0.0L && x == std::floor(x)) return 0.0L;
  return 1.0L / std::tgamma(x);
}

// Series without order checks; x >= 0.
SpecialValue besselSeriesAny(double nu, double x) {
  if (x < 0.0) throw RangeError("Bessel J needs x >= 0");
  if (nu < 0.0 && nu == std::floor(nu)) {
    const SpecialValue r = besselSeriesAny(-nu, x);
    const double sign = static_cast<long>(-nu) % 2 == 0 ? 1.0 : -1.0;
    return {sign * r.value, r.errorEstimate};
  }
  if (x == 0.0) {
    if (nu == 0.0) return {1.0, 0.0};
    if (nu > 0.0) return {0.0, 0.0};
    throw RangeError("J_nu(0) is unbounded for negative non-integer nu");
  }
  const ld half = static_cast<ld>(x) / 2.0L;
  const ld q = -half * half;
  ld t = std::pow(half, static_cast<ld>(nu)) * reciprocalGamma(static_cast<ld>(nu) + 1.0L);
  CompensatedSum s;
  s.add(t);
  ld maxTerm = std::fabs(t);
  for (int k = 1; k < 500; ++k) {
    t *= q / (static_cast<ld>(k) * (static_cast<ld>(k) + nu));
    s.add(t);
    maxTerm = std::max(maxTerm, std::fabs(t));
    if (k > half && std::fabs(t) <= 1e-22L * std::fabs(s.value())) break;
    if (k > half && std::fabs(t) <= 1e-22L * maxTerm) break;
  }
  const ld v = s.value();
  return {static_cast<double>(v), static_cast<double>(8.0L * kLdEps * maxTerm) + kEps * std::fabs(static_cast<double>(v))};
}

SpecialValue besselAsymptoticAny(double nu, double x) {
  if (!(x > 0.0)) throw RangeError("Hankel expansion needs x > 0");
  const ld mu = 4.0L * nu * nu;
  ld term = 1.0L;
  ld p = 1.0L, qsum = 0.0L, last = 1.0L;
  for (int k = 1; k < 200; ++k) {
    const ld odd = 2.0L * k - 1.0L;
    const ld next = term * (mu - odd * odd) / (k * 8.0L * x);
    if (std::fabs(next) > std::fabs(term) && k > std::fabs(nu) + 1) break;
    term = next;
    // a_k / x^k enters P with sign (-1)^(k/2) for even k and Q with
    // (-1)^((k-1)/2) for odd k.
    const int m = k % 4;
    if (m == 0)
      p += term;
    else if (m == 1)
      qsum += term;
    else if (m == 2)
      p -= term;
    else
      qsum -= term;
    last = std::fabs(term);
    if (last < 1e-21L) break;
  }
  const ld omega = static_cast<ld>(x) - static_cast<ld>(nu) * std::numbers::pi_v<ld> / 2.0L - std::numbers::pi_v<ld> / 4.0L;
  const ld amp = std::sqrt(2.0L / (std::numbers::pi_v<ld> * x));
  const ld v = amp * (p * std::cos(omega) - qsum * std::sin(omega));
  return {static_cast<double>(v), static_cast<double>(amp * last) + 4.0 * kEps * std::fabs(static_cast<double>(v))};
}

SpecialValue besselAny(double nu, double x) {
  return x <= kBesselSeriesLimit ? besselSeriesAny(nu, x) : besselAsymptoticAny(nu, x);
}

void checkBesselOrder(double nu) {
  if (!(std::fabs(nu) <= 5.0)) {
    std::ostringstream os;
    os << "order " << nu << " outside [-5, 5]";
    throw UnsupportedOrder(os.str());
  }
}

// 1F1 for z >= 0 with no range limit (caller guards overflow).
SpecialValue kummerSeries(double a, double b, double z) {
  CompensatedSum s;
  ld t = 1.0L, absSum = 1.0L;
  s.add(t);
  for (int k = 0; k < 20000; ++k) {
    const ld ratio = (static_cast<ld>(a) + k) / (static_cast<ld>(b) + k) * static_cast<ld>(z) / (k + 1.0L);
    t *= ratio;
    if (t == 0.0L) break;
    s.add(t);
    absSum += std::fabs(t);
    if (std::fabs(ratio) < 0.5L && std::fabs(t) <= 1e-21L * std::fabs(s.value())) break;
    if (k == 19999) throw NoConvergence("1F1 series did not converge");
  }
  const ld v = s.value();
  return {static_cast<double>(v), static_cast<double>(4.0L * kLdEps * absSum) + kEps * std::fabs(static_cast<double>(v))};
}

SpecialValue kummerAny(double a, double b, double z) {
  if (isNonPositiveInteger(b)) {
    std::ostringstream os;
    os << "b = " << b << " is a nonpositive integer";
    throw PoleInB(os.str());
  }
  if (z == 0.0) return {1.0, 0.0};
  if (z > 0.0) return kummerSeries(a, b, z);
  // A terminating series is summed directly; otherwise Kummer's transform
  // keeps all terms of one sign.
  if (isNonPositiveInteger(a) && -a <= 60) return kummerSeries(a, b, z);
  const SpecialValue t = kummerSeries(b - a, b, -z);
  const double e = std::exp(z);
  return {e * t.value, e * t.errorEstimate + kEps * std::fabs(e * t.value)};
}

// ---- parabolic cylinder functions ----

struct ScaledState {
  ld y;       // value / exp(logScale)
  ld dy;      // derivative / exp(logScale)
  ld logScale;
};

// Integrates D'' = (z^2/4 - nu - 1/2) D from z0 to z1 with Taylor steps.
ScaledState weberContinue(double nu, ScaledState s, double z0, double z1) {
  constexpr int kOrder = 32;
  ld z = z0;
  const ld dir = z1 >= z0 ? 1.0L : -1.0L;
  ld c[kOrder + 1];
  while (dir * (z1 - z) > 0.0L) {
    const ld q0 = z * z / 4.0L - nu - 0.5L, q1 = z / 2.0L, q2 = 0.25L;
    ld h = 0.6L / (1.0L + std::sqrt(std::fabs(q0)) + 0.5L * std::sqrt(std::fabs(q1)));
    h = std::min(h, 0.5L);
    if (h >= dir * (z1 - z)) h = dir * (z1 - z);
    h *= dir;
    c[0] = s.y;
    c[1] = s.dy;
    for (int k = 0; k + 2 <= kOrder; ++k) {
      ld acc = q0 * c[k];
      if (k >= 1) acc += q1 * c[k - 1];
      if (k >= 2) acc += q2 * c[k - 2];
      c[k + 2] = acc / ((k + 1.0L) * (k + 2.0L));
    }
    ld y = 0.0L, dy = 0.0L;
    for (int k = kOrder; k >= 0; --k) {
      y = y * h + c[k];
      if (k >= 1) dy = dy * h + k * c[k];
    }
    z += h;
    const ld scale = std::max(std::fabs(y), std::fabs(dy));
    if (scale > 0.0L && std::isfinite(static_cast<double>(std::log(scale)))) {
      s.y = y / scale;
      s.dy = dy / scale;
      s.logScale += std::log(scale);
    } else {
      s.y = y;
      s.dy = dy;
    }
  }
  return s;
}

ValueAndDerivative unscale(const ScaledState& s, ld sign = 1.0L) {
  const ld e = std::exp(s.logScale);
  return {static_cast<double>(sign * s.y * e), static_cast<double>(sign * s.dy * e)};
}

// D_nu and D_nu' from the large-z expansion at Z, scaled.
ScaledState weberAsymptotic(double nu, double Z) {
  const ld z2 = static_cast<ld>(Z) * Z;
  ld t = 1.0L, s = 1.0L, ds = 0.0L;
  for (int k = 0; k < 400; ++k) {
    const ld next = -t * (nu - 2.0L * k) * (nu - 2.0L * k - 1.0L) / (2.0L * (k + 1.0L) * z2);
    if (std::fabs(next) > std::fabs(t)) break;
    t = next;
    s += t;
    ds += -2.0L * (k + 1) * t / Z;
    if (std::fabs(t) < 1e-22L) break;
  }
  const ld logScale = nu * std::log(static_cast<ld>(Z)) - z2 / 4.0L;
  return {s, (nu / Z - Z / 2.0L) * s + ds, logScale};
}

void checkParabolicRange(double nu, double z) {
  if (!(std::fabs(nu) <= 60.0) || !(std::fabs(z) <= 60.0)) {
    std::ostringstream os;
    os << "D_nu(z) supported for |nu| <= 60, |z| <= 60, got nu = " << nu << ", z = " << z;
    throw RangeError(os.str());
  }
}

struct KummerD {
  double value;
  double error;
  double condition;  // (|t1| + |t2|) / |t1 - t2|
};

KummerD parabolicKummerImpl(double nu, double z) {
  const double w = z * z / 2.0;
  const SpecialValue m1 = kummerAny(-nu / 2.0, 0.5, w);
  const SpecialValue m2 = kummerAny((1.0 - nu) / 2.0, 1.5, w);
  const ld sqrtPi = std::sqrt(std::numbers::pi_v<ld>);
  const ld c1 = sqrtPi * reciprocalGamma((1.0L - nu) / 2.0L);
  const ld c2 = std::sqrt(2.0L) * sqrtPi * z * reciprocalGamma(-nu / 2.0L);
  const ld t1 = c1 * m1.value, t2 = c2 * m2.value;
  const ld pref = std::pow(2.0L, nu / 2.0L) * std::exp(-static_cast<ld>(z) * z / 4.0L);
  const ld diff = t1 - t2;
  const ld mag = std::fabs(t1) + std::fabs(t2);
  const double err = static_cast<double>(pref * (std::fabs(c1) * m1.errorEstimate + std::fabs(c2) * m2.errorEstimate +
                                                  kLdEps * mag));
  const double cond = diff == 0.0L ? std::numeric_limits<double>::infinity() : static_cast<double>(mag / std::fabs(diff));
  return {static_cast<double>(pref * diff), err, mag == 0.0L ? 1.0 : cond};
}

}  // namespace

SpecialValue besselJSeries(double nu, double x) {
  checkBesselOrder(nu);
  return besselSeriesAny(nu, x);
}

SpecialValue besselJAsymptotic(double nu, double x) {
  checkBesselOrder(nu);
  return besselAsymptoticAny(nu, x);
}

SpecialValue besselJ(double nu, double x) {
  checkBesselOrder(nu);
  if (!(x >= 0.0) || !std::isfinite(x)) throw RangeError("Bessel J needs finite x >= 0");
  return besselAny(nu, x);
}

std::vector<double> besselJTaylor(double nu, double x, int order) {
  checkBesselOrder(nu);
  if (!(x > 0.0) && order > 0) throw RangeError("Bessel derivatives need x > 0");
  std::vector<double> c(order + 1);
  double factorial = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) factorial *= k;
    // J^(k) = 2^-k sum_j (-1)^j C(k, j) J_{nu-k+2j}
    ld acc = 0.0L, binom = 1.0L;
    for (int j = 0; j <= k; ++j) {
      acc += (j % 2 == 0 ? 1.0L : -1.0L) * binom * besselAny(nu - k + 2.0 * j, x).value;
      binom = binom * (k - j) / (j + 1.0L);
    }
    c[k] = static_cast<double>(acc / std::pow(2.0L, k)) / factorial;
  }
  return c;
}

SpecialValue kummer1F1(double a, double b, double z) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(z)) throw RangeError("non-finite 1F1 argument");
  if (std::fabs(z) > 200.0) throw RangeError("1F1 supported for |z| <= 200");
  return kummerAny(a, b, z);
}

std::vector<double> kummer1F1Taylor(double a, double b, double z, int order) {
  if (std::fabs(z) > 200.0) throw RangeError("1F1 supported for |z| <= 200");
  std::vector<double> c(order + 1);
  ld coef = 1.0L;  // (a)_k / ((b)_k k!)
  for (int k = 0; k <= order; ++k) {
    c[k] = static_cast<double>(coef * kummerAny(a + k, b + k, z).value);
    coef *= (static_cast<ld>(a) + k) / ((static_cast<ld>(b) + k) * (k + 1.0L));
  }
  return c;
}

SpecialValue parabolicDKummer(double nu, double z) {
  const KummerD k = parabolicKummerImpl(nu, z);
  return {k.value, k.error};
}

ValueAndDerivative parabolicDWithDerivative(double nu, double z) {
  checkParabolicRange(nu, z);
  constexpr double kMaxCondition = 1e5;
  if (z * z / 2.0 <= 150.0) {
    const KummerD d0 = parabolicKummerImpl(nu, z);
    const KummerD d1 = parabolicKummerImpl(nu + 1.0, z);
    const bool accurate = d0.error <= 1e-12 * std::fabs(d0.value) && d1.error <= 1e-12 * std::fabs(d1.value);
    if (accurate && d0.condition <= kMaxCondition && d1.condition <= kMaxCondition)
      return {d0.value, z / 2.0 * d0.value - d1.value};
  }
  if (z >= 0.0) {
    const double far = std::max(z, 10.0 + 1.5 * std::fabs(nu));
    const ScaledState s = weberContinue(nu, weberAsymptotic(nu, far), far, z);
    return unscale(s);
  }
  // Exact values at the origin, continued towards negative z.
  const ld sqrtPi = std::sqrt(std::numbers::pi_v<ld>);
  const ld d0 = std::pow(2.0L, nu / 2.0L) * sqrtPi * reciprocalGamma((1.0L - nu) / 2.0L);
  const ld d1 = -std::pow(2.0L, (nu + 1.0L) / 2.0L) * sqrtPi * reciprocalGamma(-nu / 2.0L);
  const ld scale = std::max(std::fabs(d0), std::fabs(d1));
  const ScaledState s = weberContinue(nu, {d0 / scale, d1 / scale, std::log(scale)}, 0.0, z);
  return unscale(s);
}

SpecialValue parabolicD(double nu, double z) {
  const ValueAndDerivative d = parabolicDWithDerivative(nu, z);
  return {d.value, 1e-12 * std::fabs(d.value) + 1e-14 * std::fabs(d.derivative)};
}

std::vector<double> parabolicDTaylor(double nu, double z, int order) {
  const ValueAndDerivative d = parabolicDWithDerivative(nu, z);
  std::vector<long double> c(std::max(order, 1) + 1, 0.0L);
  c[0] = d.value;
  c[1] = d.derivative;
  const ld q0 = static_cast<ld>(z) * z / 4.0L - nu - 0.5L, q1 = z / 2.0L, q2 = 0.25L;
  for (int k = 0; k + 2 <= order; ++k) {
    ld acc = q0 * c[k];
    if (k >= 1) acc += q1 * c[k - 1];
    if (k >= 2) acc += q2 * c[k - 2];
    c[k + 2] = acc / ((k + 1.0L) * (k + 2.0L));
  }
  return std::vector<double>(c.begin(), c.begin() + order + 1);
}

double carlsonRF(double x, double y, double z) {
  if (x < 0.0 || y < 0.0 || z < 0.0 || (x == 0.0) + (y == 0.0) + (z == 0.0) > 1)
    throw DomainError("R_F needs nonnegative arguments with at most one zero");
  ld xx = x, yy = y, zz = z;
  for (int it = 0; it < 100; ++it) {
    const ld mu = (xx + yy + zz) / 3.0L;
    const ld dx = 1.0L - xx / mu, dy = 1.0L - yy / mu, dz = 1.0L - zz / mu;
    if (std::max({std::fabs(dx), std::fabs(dy), std::fabs(dz)}) < 1e-4L) {
      const ld e2 = dx * dy - dz * dz, e3 = dx * dy * dz;
      return static_cast<double>((1.0L - e2 / 10.0L + e3 / 14.0L + e2 * e2 / 24.0L - 3.0L * e2 * e3 / 44.0L) /
                                 std::sqrt(mu));
    }
    const ld sx = std::sqrt(xx), sy = std::sqrt(yy), sz = std::sqrt(zz);
    const ld lambda = sx * (sy + sz) + sy * sz;
    xx = (xx + lambda) / 4.0L;
    yy = (yy + lambda) / 4.0L;
    zz = (zz + lambda) / 4.0L;
  }
  throw NoConvergence("R_F duplication did not converge");
}

SpecialValue ellipticF(double phi, double k) {
  if (!std::isfinite(phi) || !std::isfinite(k)) throw DomainError("non-finite elliptic argument");
  const double pi = std::numbers::pi;
  const double n = std::round(phi / pi);
  const double rest = phi - n * pi;
  if (n != 0.0 && std::fabs(k) >= 1.0) throw DomainError("|k| >= 1 and |phi| > pi/2 crosses a singularity");
  const double s = std::sin(rest), c = std::cos(rest);
  const double arg = 1.0 - k * k * s * s;
  if (!(arg > 0.0)) throw DomainError("|k sin(phi)| >= 1");
  double value = s * carlsonRF(c * c, arg, 1.0);
  if (n != 0.0) value += 2.0 * n * carlsonRF(0.0, 1.0 - k * k, 1.0);
  return {value, 4.0 * kEps * (1.0 + std::fabs(value))};
}

double wronskian(const std::function<double(double)>& f, const std::function<double(double)>& g, double x,
                 double h) {
  const auto d = [&](const std::function<double(double)>& fn) {
    return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h);
  };
  return f(x) * d(g) - d(f) * g(x);
}

}  // namespace darboux
