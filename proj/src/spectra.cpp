#include "darboux/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace darboux {

namespace {

using std::numbers::pi;

constexpr double kDecayExponent = 40.0;
constexpr double kMaxIndex = 60.0;

double bisect(const std::function<double(double)>& f, double lo, double hi, double flo, double tol) {
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Walks outward from `from` in direction `dir` until the accumulated WKB
// exponent of the current forbidden stretch exceeds kDecayExponent.
double decayCut(const SpectralProblem& prob, double from, double dir, double p) {
  const double step = 1e-2;
  double x = from, exponent = 0.0;
  for (int i = 0; i < 2000000; ++i) {
    x += dir * step;
    const double q = prob.Q(x, p);
    if (q >= 0.0) {
      exponent = 0.0;
    } else {
      exponent += std::sqrt(-q) * step;
      if (exponent > kDecayExponent) return x;
    }
  }
  throw NotBracketed("no decay found while truncating " + prob.name);
}

struct NumerovGrid {
  double x0 = 0.0;
  double h = 0.0;
  int N = 0;
  std::vector<double> q0, q1;
};

NumerovGrid makeGrid(const SpectralProblem& prob, double xlo, double xhi, double h, bool periodic) {
  NumerovGrid g;
  g.N = std::max(4, static_cast<int>(std::ceil((xhi - xlo) / h - 1e-9)));
  g.h = (xhi - xlo) / g.N;
  g.x0 = xlo;
  const int count = periodic ? g.N : g.N + 1;
  g.q0.resize(count);
  g.q1.resize(count);
  const bool singularStart = !periodic && prob.lo.kind == BoundaryCondition::Kind::PowerLaw;
  for (int i = singularStart ? 1 : 0; i < count; ++i) {
    const double x = xlo + i * g.h;
    g.q0[i] = prob.q0(x);
    g.q1[i] = prob.q1(x);
  }
  if (periodic) {
    // Average across the seam where a non-periodic Q jumps.
    g.q0[0] = 0.5 * (prob.q0(xlo) + prob.q0(xhi));
    g.q1[0] = 0.5 * (prob.q1(xlo) + prob.q1(xhi));
  }
  return g;
}

struct Shot {
  int nodes = 0;
  double end = 0.0;
};

int signOf(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

Shot shoot(const SpectralProblem& prob, const NumerovGrid& g, double p) {
  const double h = g.h, h2 = h * h;
  const auto Q = [&](int i) { return g.q0[i] + p * g.q1[i]; };
  int i0 = 0;
  double prev = 0.0, cur = 0.0;
  switch (prob.lo.kind) {
    case BoundaryCondition::Kind::Dirichlet:
    case BoundaryCondition::Kind::Decay:
    case BoundaryCondition::Kind::Periodic:
      prev = 0.0;
      cur = h;
      break;
    case BoundaryCondition::Kind::Robin: {
      const double y = prob.lo.b, dy = -prob.lo.a;
      const double q = Q(0), dq = (-3.0 * Q(0) + 4.0 * Q(1) - Q(2)) / (2.0 * h);
      const double d2 = -q * y, d3 = -dq * y - q * dy, d4 = -2.0 * dq * dy + q * q * y;
      prev = y;
      cur = y + h * dy + h2 / 2 * d2 + h2 * h / 6 * d3 + h2 * h2 / 24 * d4;
      break;
    }
    case BoundaryCondition::Kind::PowerLaw: {
      const double s = prob.lo.exponent;
      const auto start = [&](int i) {
        const double t = i * h;
        const double r = Q(i) + s * (s - 1.0) / (t * t);
        return std::pow(t, s) * (1.0 - r * t * t / (2.0 * (2.0 * s + 1.0)));
      };
      i0 = 1;
      prev = start(1);
      cur = start(2);
      break;
    }
  }
  Shot out;
  int last = signOf(prev) != 0 ? signOf(prev) : signOf(cur);
  if (signOf(cur) != 0 && signOf(cur) != last) {
    ++out.nodes;
    last = signOf(cur);
  }
  double fPrev = 1.0 + h2 * Q(i0) / 12.0, fCur = 1.0 + h2 * Q(i0 + 1) / 12.0;
  for (int i = i0 + 1; i < g.N; ++i) {
    const double fNext = 1.0 + h2 * Q(i + 1) / 12.0;
    const double next = ((12.0 - 10.0 * fCur) * cur - fPrev * prev) / fNext;
    prev = cur;
    cur = next;
    fPrev = fCur;
    fCur = fNext;
    const int sg = signOf(cur);
    if (sg != 0) {
      if (last != 0 && sg != last) ++out.nodes;
      last = sg;
    }
    if (std::abs(cur) > 1e100) {
      cur *= 1e-100;
      prev *= 1e-100;
    }
  }
  out.end = cur;
  return out;
}

// Period map of the Numerov recurrence with Q indexed cyclically.
struct Monodromy {
  double m00, m01, m10, m11;
};

Monodromy numerovMonodromy(const NumerovGrid& g, double p, std::vector<double>* profile = nullptr,
                           double c0 = 0.0, double c1 = 0.0) {
  const double h2 = g.h * g.h;
  const auto f = [&](int i) {
    const int k = i % g.N;
    return 1.0 + h2 * (g.q0[k] + p * g.q1[k]) / 12.0;
  };
  const auto run = [&](double y0, double y1, std::vector<double>* out) {
    if (out) {
      out->clear();
      out->push_back(y0);
      out->push_back(y1);
    }
    double prev = y0, cur = y1;
    for (int i = 1; i <= g.N; ++i) {
      const double next = ((12.0 - 10.0 * f(i)) * cur - f(i - 1) * prev) / f(i + 1);
      prev = cur;
      cur = next;
      if (out) out->push_back(cur);
    }
    return std::pair<double, double>{prev, cur};  // (psi_N, psi_{N+1})
  };
  if (profile) run(c0, c1, profile);
  const auto a = run(1.0, 0.0, nullptr);
  const auto b = run(0.0, 1.0, nullptr);
  return {a.first, b.first, a.second, b.second};
}

EigenLevel periodicNumerov(const SpectralProblem& prob, int n, const NumerovOptions& opt) {
  const double period = prob.xHi - prob.xLo;
  const NumerovGrid g = makeGrid(prob, prob.xLo, prob.xHi, opt.h, true);
  const auto disc = [&](double p) {
    const Monodromy m = numerovMonodromy(g, p);
    return 2.0 - (m.m00 + m.m11);
  };
  const std::vector<double> roots = scanRoots(disc, prob.paramLo, prob.paramHi, opt.scanPanels, n + 1, opt.tolerance);
  EigenLevel lvl;
  lvl.n = n;
  lvl.value = roots[n];
  lvl.residual = std::abs(disc(lvl.value));
  const Monodromy m = numerovMonodromy(g, lvl.value);
  // Fixed vector of the period map.
  double c0 = m.m01, c1 = 1.0 - m.m00;
  if (std::hypot(c0, c1) < std::hypot(1.0 - m.m11, m.m10)) {
    c0 = 1.0 - m.m11;
    c1 = m.m10;
  }
  std::vector<double> psi;
  numerovMonodromy(g, lvl.value, &psi, c0, c1);
  int nodes = 0, last = 0;
  for (int i = 0; i <= g.N; ++i) {
    const int sg = signOf(psi[i]);
    if (sg == 0) continue;
    if (last != 0 && sg != last) ++nodes;
    last = sg;
  }
  lvl.nodes = nodes;
  if (nodes % 2 != 0 || nodes < n || nodes > n + 1) {
    std::ostringstream os;
    os << prob.name << ": periodic level " << n << " has " << nodes << " nodes";
    throw NodeMismatch(os.str());
  }
  (void)period;
  return lvl;
}

double reciprocalGamma(double x) {
  if (x > 0.0) return x > 171.0 ? 0.0 : 1.0 / std::tgamma(x);
  return std::tgamma(1.0 - x) * std::sin(pi * x) / pi;
}

// E window edge below which U'' + (4Eu - 4 beta^2 u^2 - c) U = 0 has no
// oscillation on u > 1/2.
double weberLowerBound(double beta, double c) {
  if (beta * beta - c >= 0.0) return 0.5 * (beta * beta + c);
  return beta * std::sqrt(c);
}

SpectralProblem weberWallProblem(const std::string& name, double beta, double c, double robinA, double robinB) {
  SpectralProblem p;
  p.name = name;
  p.parameter = "E";
  p.q0 = [beta, c](double u) { return -4.0 * beta * beta * u * u - c; };
  p.q1 = [](double u) { return 4.0 * u; };
  p.xLo = 0.5;
  p.xHi = kInfinity;
  p.lo = robinB == 0.0 ? BoundaryCondition::dirichlet() : BoundaryCondition::robin(robinA, robinB);
  p.hi = BoundaryCondition::decay();
  p.paramLo = weberLowerBound(beta, c) - beta * beta;
  p.paramHi = p.paramLo + 16.0 * std::pow(beta, 1.5) + 5.0 * beta * beta;
  return p;
}

double weberIndex(double beta, double c, double E) { return (E * E / (beta * beta) - c) / (4.0 * beta) - 0.5; }

double weberCondition(double beta, double c, double E, double robinA, double robinB) {
  const double nu = weberIndex(beta, c, E);
  const double z = 2.0 * std::sqrt(beta) * (0.5 - E / (2.0 * beta * beta));
  if (robinB == 0.0) return robinA * parabolicD(nu, z).value;
  const ValueAndDerivative d = parabolicDWithDerivative(nu, z);
  return robinA * d.value + robinB * 2.0 * std::sqrt(beta) * d.derivative;
}

double quantizeWeber(double beta, double c, int n, double robinA, double robinB) {
  if (!(beta > 0.0)) throw SpectrumUnbounded("the u-problem needs a positive confining coefficient");
  if (n < 0) throw DomainError("negative level index");
  double lo = weberLowerBound(beta, c) - beta * beta;
  if (robinB != 0.0 && robinA / robinB > 0.0) {
    // psi'/psi = -kappa at the wall binds a surface state near Q(1/2) = -kappa^2.
    const double kappa = robinA / robinB;
    lo = std::min(lo, 0.5 * (beta * beta + c - 2.0 * kappa * kappa) - beta * beta);
  }
  // Largest E for which the index and the argument stay in the D_nu range.
  const double eIndex = beta * std::sqrt(4.0 * beta * (kMaxIndex + 0.5) + c);
  const double eArg = 2.0 * beta * beta * (0.5 + kMaxIndex / (2.0 * std::sqrt(beta)));
  const double cap = std::min(eIndex, eArg) * (1.0 - 1e-12);
  double hi = std::min(cap, lo + 4.0 * std::pow(beta, 1.5) * std::sqrt(n + 1.0) + 4.0 * beta * beta);
  const auto f = [&](double E) { return weberCondition(beta, c, E, robinA, robinB); };
  for (;;) {
    try {
      return scanRoots(f, lo, hi, 400, n + 1)[n];
    } catch (const NotBracketed&) {
      if (hi >= cap) throw;
      hi = std::min(cap, lo + 1.5 * (hi - lo));
    }
  }
}

}  // namespace

// ---- separation ----

SeparatedProblems deriveSeparated(const ModelSpec& m, const Chart& c, double E, double mu) {
  const LiouvilleForm lf = liouvilleForm(c, m);
  SeparatedProblems out;
  const std::string tag = m.name() + "/" + c.name();
  out.first.name = tag + "/first";
  out.first.parameter = "E";
  out.first.q0 = [f = lf.f, mu](double x) { return -f(x) - mu; };
  out.first.q1 = lf.sigma;
  out.second.name = tag + "/second";
  out.second.parameter = "mu";
  out.second.q0 = [tau = lf.tau, g = lf.g, E](double y) { return E * tau(y) - g(y); };
  out.second.q1 = [](double) { return 1.0; };
  out.first.lo = out.first.hi = BoundaryCondition::decay();
  out.second.lo = out.second.hi = BoundaryCondition::decay();
  out.first.xLo = out.second.xLo = -kInfinity;
  out.first.xHi = out.second.xHi = kInfinity;
  if (c.kind == Chart::Kind::NativeUV) {
    out.first.xLo = 0.0;
    out.first.lo = BoundaryCondition::dirichlet();
  } else if (c.kind == Chart::Kind::ParabolicXiEta) {
    out.first.xLo = 0.0;
    out.first.lo = BoundaryCondition::dirichlet();
  }
  return out;
}

// ---- Numerov ----

std::pair<double, double> truncatedDomain(const SpectralProblem& prob) {
  double lo = prob.xLo, hi = prob.xHi;
  const double anchor = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
  if (!std::isfinite(hi)) hi = decayCut(prob, anchor, 1.0, prob.paramHi);
  if (!std::isfinite(lo)) lo = decayCut(prob, anchor, -1.0, prob.paramHi);
  return {lo, hi};
}

EigenLevel numerovEigen(const SpectralProblem& prob, int n, const NumerovOptions& opt) {
  if (n < 0) throw DomainError("negative level index");
  if (prob.lo.kind == BoundaryCondition::Kind::Periodic || prob.hi.kind == BoundaryCondition::Kind::Periodic) {
    if (prob.lo.kind != prob.hi.kind) throw DomainError("periodic conditions must be imposed at both ends");
    return periodicNumerov(prob, n, opt);
  }
  if (prob.hi.kind != BoundaryCondition::Kind::Dirichlet && prob.hi.kind != BoundaryCondition::Kind::Decay)
    throw DomainError("the right end must be Dirichlet or Decay");
  const auto [xlo, xhi] = truncatedDomain(prob);
  const NumerovGrid g = makeGrid(prob, xlo, xhi, opt.h, false);
  const auto nodesAt = [&](double p) { return shoot(prob, g, p).nodes; };

  double lo = prob.paramLo;
  for (int k = 0; nodesAt(lo) > n; ++k) {
    if (k == 30) throw NotBracketed(prob.name + ": scan window starts above the requested level");
    lo -= (prob.paramHi - prob.paramLo) * std::ldexp(1.0, k);
  }
  const double start = lo;
  const double step = (prob.paramHi - start) / opt.scanPanels;
  double hi = lo;
  bool found = false;
  for (int k = 1; k <= opt.scanPanels; ++k) {
    hi = start + k * step;
    if (nodesAt(hi) > n) {
      found = true;
      break;
    }
    lo = hi;
  }
  if (!found) {
    std::ostringstream os;
    os << prob.name << ": level " << n << " not inside [" << prob.paramLo << ", " << prob.paramHi << "]";
    throw NotBracketed(os.str());
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= opt.tolerance * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) break;
    (nodesAt(mid) > n ? hi : lo) = mid;
  }
  EigenLevel lvl;
  lvl.n = n;
  lvl.value = 0.5 * (lo + hi);
  lvl.residual = hi - lo;
  lvl.nodes = nodesAt(lo);
  if (lvl.nodes != n) {
    std::ostringstream os;
    os << prob.name << ": level " << n << " has " << lvl.nodes << " nodes";
    throw NodeMismatch(os.str());
  }
  return lvl;
}

SpectrumResult numerovSpectrum(const SpectralProblem& prob, int count, const NumerovOptions& opt) {
  SpectrumResult r{prob.name, prob.parameter, {}};
  for (int n = 0; n < count; ++n) r.levels.push_back(numerovEigen(prob, n, opt));
  for (std::size_t k = 1; k < r.levels.size(); ++k)
    if (!(r.levels[k].value > r.levels[k - 1].value)) throw NodeMismatch(prob.name + ": levels not increasing");
  return r;
}

double floquetTrace(const SpectralProblem& prob, double p, double period, double x0, double h) {
  SpectralProblem shifted = prob;
  shifted.xLo = x0;
  shifted.xHi = x0 + period;
  const NumerovGrid g = makeGrid(shifted, x0, x0 + period, h, true);
  const Monodromy m = numerovMonodromy(g, p);
  return m.m00 + m.m11;
}

double periodicWronskianCondition(const SolutionFunction& f, const SolutionFunction& g, double period, double x0) {
  const ValueAndDerivative f0 = f(x0), f1 = f(x0 + period), g0 = g(x0), g1 = g(x0 + period);
  const double df = f0.value - f1.value, dfp = f0.derivative - f1.derivative;
  const double dg = g0.value - g1.value, dgp = g0.derivative - g1.derivative;
  return df * dgp - dfp * dg;
}

std::function<double(double)> periodicWronskianCondition(const SpectralProblem& prob, double period, double x0) {
  return [prob, period, x0](double p) {
    const int steps = std::max(64, static_cast<int>(std::ceil(period / 5e-4)));
    const double h = period / steps;
    // Columns: the solutions with (y, y') = (1, 0) and (0, 1) at x0.
    double y[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
    for (int k = 0; k < 2; ++k) {
      double a = y[k][0], b = y[k][1];
      for (int i = 0; i < steps; ++i) {
        const double x = x0 + i * h;
        const double qa = prob.Q(x, p), qm = prob.Q(x + 0.5 * h, p), qb = prob.Q(x + h, p);
        const double k1a = b, k1b = -qa * a;
        const double k2a = b + 0.5 * h * k1b, k2b = -qm * (a + 0.5 * h * k1a);
        const double k3a = b + 0.5 * h * k2b, k3b = -qm * (a + 0.5 * h * k2a);
        const double k4a = b + h * k3b, k4b = -qb * (a + h * k3a);
        a += h / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
        b += h / 6.0 * (k1b + 2 * k2b + 2 * k3b + k4b);
      }
      y[k][0] = a;
      y[k][1] = b;
    }
    const double df = 1.0 - y[0][0], dfp = -y[0][1];
    const double dg = -y[1][0], dgp = 1.0 - y[1][1];
    return df * dgp - dfp * dg;
  };
}

std::vector<double> scanRoots(const std::function<double(double)>& f, double lo, double hi, int panels, int count,
                              double tolerance) {
  std::vector<double> roots;
  if (count <= 0) return roots;
  const double step = (hi - lo) / panels;
  double a = lo, fa = f(lo);
  if (fa == 0.0) roots.push_back(lo);
  for (int k = 1; k <= panels && static_cast<int>(roots.size()) < count; ++k) {
    const double b = lo + k * step, fb = f(b);
    if (fb == 0.0) {
      roots.push_back(b);
    } else if (fa != 0.0 && std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0)) {
      roots.push_back(bisect(f, a, b, fa, tolerance));
    }
    a = b;
    fa = fb;
  }
  if (static_cast<int>(roots.size()) < count) {
    std::ostringstream os;
    os << "found " << roots.size() << " of " << count << " roots in [" << lo << ", " << hi << "]";
    throw NotBracketed(os.str());
  }
  return roots;
}

// ---- potential 1 ----

SpectralProblem p1uProblem(double beta, double b2, double mu, double robinA, double robinB) {
  if (!(beta > 0.0)) throw SpectrumUnbounded("b1 must be positive for a confined u-problem");
  return weberWallProblem("p1/u", beta, mu + 4.0 * b2, robinA, robinB);
}

SpectralProblem p1vProblem(double beta, double gamma) {
  if (!(beta > 0.0)) throw SpectrumUnbounded("b1 must be positive");
  if (!(gamma > 0.5)) throw DomainError("gamma must exceed 1/2");
  const ModelSpec m = ModelSpec::p1(beta * beta, 0.0, (gamma * gamma - 0.25) / 4.0);
  SpectralProblem p = deriveSeparated(m, Chart::native(), 0.0, 0.0).second;
  p.name = "p1/v";
  p.xLo = 0.0;
  p.xHi = 2.0 * pi;
  p.lo = BoundaryCondition::powerLaw(gamma + 0.5);
  p.hi = BoundaryCondition::dirichlet();
  p.paramLo = 2.0 * beta * std::sqrt(gamma * gamma - 0.25) - beta;
  p.paramHi = p.paramLo + 4.0 * beta * 64.0;
  return p;
}

double p1Index(double beta, double b2, double mu, double E) { return weberIndex(beta, mu + 4.0 * b2, E); }

double p1uCondition(double beta, double b2, double mu, double E, double robinA, double robinB) {
  return weberCondition(beta, mu + 4.0 * b2, E, robinA, robinB);
}

double quantizeP1u(double beta, double b2, double mu, int n, double robinA, double robinB) {
  return quantizeWeber(beta, mu + 4.0 * b2, n, robinA, robinB);
}

double p1vCondition(double beta, double gamma, double mu) {
  return kummer1F1(0.5 * (1.0 + gamma) - mu / (4.0 * beta), 1.0 + gamma, 4.0 * beta * pi * pi).value;
}

double quantizeP1v(double beta, double gamma, int n) {
  if (!(beta > 0.0)) throw SpectrumUnbounded("b1 must be positive");
  if (!(gamma > 0.5)) throw DomainError("gamma must exceed 1/2");
  if (n < 0) throw DomainError("negative level index");
  const double lo = 2.0 * beta * std::sqrt(gamma * gamma - 0.25) - beta;
  double hi = lo + 4.0 * beta * (n + 3.0);
  const auto f = [&](double mu) { return p1vCondition(beta, gamma, mu); };
  for (int attempt = 0;; ++attempt) {
    try {
      return scanRoots(f, lo, hi, 400, n + 1)[n];
    } catch (const NotBracketed&) {
      if (attempt >= 6) throw;
      hi = lo + 2.0 * (hi - lo);
    }
  }
}

P1Spectral p1Spectral(const ModelSpec& m) {
  m.validate();
  if (m.potential != Potential::P1) throw ModelMismatch("expected potential p1");
  const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
  if (!(b1 > 0.0)) throw SpectrumUnbounded("b1 <= 0 leaves the u-problem without a decaying channel");
  if (!(b3 > 0.0)) throw DomainError("b3 <= 0 gives gamma <= 1/2");
  return {std::sqrt(b1), std::sqrt(4.0 * b3 + 0.25), b2};
}

// ---- potential 2 ----

SpectralProblem p2vProblem(double alpha, double a2, double w0) {
  if (!(alpha > 0.0)) throw SpectrumUnbounded("a3 must be positive");
  const ModelSpec m = ModelSpec::p2(0.0, a2, alpha * alpha);
  SpectralProblem p = deriveSeparated(m, Chart::native(), 0.0, 0.0).second;
  p.name = "p2/v";
  p.parameter = "kappa";
  p.xLo = w0;
  p.xHi = w0 + 2.0 * pi;
  p.lo = p.hi = BoundaryCondition::periodic();
  p.paramLo = -a2 * a2 / (alpha * alpha) - alpha;
  p.paramHi = p.paramLo + 4.0 * alpha * 64.0;
  return p;
}

SpectralProblem p2uProblem(double alpha, double a1, double kappa) {
  if (!(alpha > 0.0)) throw SpectrumUnbounded("a3 must be positive");
  return weberWallProblem("p2/u", alpha, kappa + 4.0 * a1, 1.0, 0.0);
}

double p2vIndex(double alpha, double a2, double kappa) {
  return (kappa + a2 * a2 / (alpha * alpha)) / (4.0 * alpha) - 0.5;
}

double p2uIndex(double alpha, double a1, double kappa, double E) { return weberIndex(alpha, kappa + 4.0 * a1, E); }

double p2vWronskianCondition(double alpha, double a2, double kappa, double w0) {
  const double nu = p2vIndex(alpha, a2, kappa), sa = 2.0 * std::sqrt(alpha);
  const double shift = a2 / (2.0 * alpha * alpha);
  const SolutionFunction plus = [=](double v) {
    const ValueAndDerivative d = parabolicDWithDerivative(nu, sa * (v + shift));
    return ValueAndDerivative{d.value, sa * d.derivative};
  };
  const SolutionFunction minus = [=](double v) {
    const ValueAndDerivative d = parabolicDWithDerivative(nu, -sa * (v + shift));
    return ValueAndDerivative{d.value, -sa * d.derivative};
  };
  return periodicWronskianCondition(plus, minus, 2.0 * pi, w0);
}

double p2vNormalizedCondition(double alpha, double a2, double kappa, double w0) {
  const double nu = p2vIndex(alpha, a2, kappa);
  if (nu > -0.5 && std::abs(nu - std::round(nu)) < 1e-7) {
    // Removable 0/0 at integer nu: average the two neighbours.
    const double d = 4.0 * alpha * 1e-6;
    return 0.5 * (p2vNormalizedCondition(alpha, a2, kappa - d, w0) + p2vNormalizedCondition(alpha, a2, kappa + d, w0));
  }
  const double w = 2.0 * std::sqrt(alpha) * std::sqrt(2.0 * pi) * reciprocalGamma(-nu);
  return p2vWronskianCondition(alpha, a2, kappa, w0) / w;
}

double quantizeP2v(double alpha, double a2, int n, double w0) {
  if (!(alpha > 0.0)) throw SpectrumUnbounded("a3 must be positive");
  if (n < 0) throw DomainError("negative level index");
  const double shift = a2 / (2.0 * alpha * alpha), sa = 2.0 * std::sqrt(alpha);
  if (std::max(std::abs(sa * (w0 + shift)), std::abs(sa * (w0 + 2.0 * pi + shift))) > kMaxIndex)
    throw DomainError("periodic window outside the parabolic cylinder range");
  const double lo = -a2 * a2 / (alpha * alpha) - alpha;
  const double cap = 4.0 * alpha * (kMaxIndex + 0.5) - a2 * a2 / (alpha * alpha);
  double hi = std::min(cap, lo + 4.0 * alpha * (n + 2.0));
  const auto f = [&](double k) { return p2vNormalizedCondition(alpha, a2, k, w0); };
  for (;;) {
    try {
      return scanRoots(f, lo, hi, 400, n + 1)[n];
    } catch (const NotBracketed&) {
      if (hi >= cap) throw;
      hi = std::min(cap, lo + 1.5 * (hi - lo));
    }
  }
}

double quantizeP2u(double alpha, double a1, double kappa, int n) {
  return quantizeWeber(alpha, kappa + 4.0 * a1, n, 1.0, 0.0);
}

P2Levels quantizeP2(const ModelSpec& m, int n, double w0) {
  m.validate();
  if (m.potential != Potential::P2) throw ModelMismatch("expected potential p2");
  const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
  if (!(a3 > 0.0)) throw SpectrumUnbounded("a3 <= 0 leaves the separated problems without a decaying channel");
  const double alpha = std::sqrt(a3);
  const double kappa0 = quantizeP2v(alpha, a2, 0, w0);
  return {quantizeP2v(alpha, a2, n, w0), quantizeP2u(alpha, a1, kappa0, n)};
}

// ---- separated states ----

SmoothField freeBesselState(double E, double m) {
  if (!(E > 0.0)) throw DomainError("the Bessel state needs E > 0");
  return {[E, m](const FieldJet& u, const FieldJet& v) {
    const FieldJet w = u - m * m / (4.0 * E);
    if (!(w.value().real() > 0.0)) throw DomainError("the Bessel state needs u > m^2/(4E)");
    const FieldJet x = (2.0 / 3.0) * std::sqrt(4.0 * E) * pow(w, 1.5);
    const FieldJet j = composeReal(x, [](double x0, int order) { return besselJTaylor(1.0 / 3.0, x0, order); });
    return sqrt(w) * j * exp(Complex(0.0, m) * v);
  }};
}

SmoothField p1SeparatedState(const P1Spectral& s, double E, double mu) {
  const double beta = s.beta, gamma = s.gamma;
  const double nu = p1Index(beta, s.b2, mu, E);
  const double a = 0.5 * (1.0 + gamma) - mu / (4.0 * beta);
  return {[=](const FieldJet& u, const FieldJet& v) {
    const FieldJet z = 2.0 * std::sqrt(beta) * (u - E / (2.0 * beta * beta));
    const FieldJet U = composeReal(z, [nu](double z0, int order) { return parabolicDTaylor(nu, z0, order); });
    const FieldJet x = beta * v * v;
    const FieldJet M =
        composeReal(x, [a, gamma](double x0, int order) { return kummer1F1Taylor(a, 1.0 + gamma, x0, order); });
    return U * pow(v, gamma + 0.5) * exp(-0.5 * beta * v * v) * M;
  }};
}

SmoothField p2SeparatedState(double alpha, double a1, double a2, double E, double kappa, double w0) {
  const double rho = p2uIndex(alpha, a1, kappa, E);
  const double nu = p2vIndex(alpha, a2, kappa);
  const double sa = 2.0 * std::sqrt(alpha), shift = a2 / (2.0 * alpha * alpha);
  const auto pair = [=](double v, double sign) {
    const ValueAndDerivative d = parabolicDWithDerivative(nu, sign * sa * (v + shift));
    return ValueAndDerivative{d.value, sign * sa * d.derivative};
  };
  const ValueAndDerivative p0 = pair(w0, 1.0), p1 = pair(w0 + 2 * pi, 1.0);
  const ValueAndDerivative m0 = pair(w0, -1.0), m1 = pair(w0 + 2 * pi, -1.0);
  // Null vector of [[dV+, dV-], [dV+', dV-']] using its larger row.
  const double r00 = p0.value - p1.value, r01 = m0.value - m1.value;
  const double r10 = p0.derivative - p1.derivative, r11 = m0.derivative - m1.derivative;
  double d1 = r01, d2 = -r00;
  if (std::hypot(r10, r11) > std::hypot(r00, r01)) {
    d1 = r11;
    d2 = -r10;
  }
  const double norm = std::hypot(d1, d2);
  d1 /= norm;
  d2 /= norm;
  return {[=](const FieldJet& u, const FieldJet& v) {
    const FieldJet zu = sa * (u - E / (2.0 * alpha * alpha));
    const FieldJet U = composeReal(zu, [rho](double z0, int order) { return parabolicDTaylor(rho, z0, order); });
    const FieldJet zv = sa * (v + shift);
    const FieldJet Vp = composeReal(zv, [nu](double z0, int order) { return parabolicDTaylor(nu, z0, order); });
    const FieldJet Vm = composeReal(-zv, [nu](double z0, int order) { return parabolicDTaylor(nu, z0, order); });
    return U * (d1 * Vp + d2 * Vm);
  }};
}

// ---- large-n law ----

AsymptoticCheck p1Asymptotic(double beta, double b2, double mu, int n, const NumerovOptions& opt) {
  if (n < 1) throw DomainError("the large-n law needs n >= 1");
  SpectralProblem prob = p1uProblem(beta, b2, mu);
  const double predicted = 2.0 * std::sqrt(beta * beta * beta * n);
  prob.paramHi = prob.paramLo + 1.5 * predicted + 4.0 * beta * beta;
  const EigenLevel lvl = numerovEigen(prob, n, opt);
  return {n, lvl.value, predicted, std::abs(lvl.value) / predicted, lvl.value > 0.0 ? 1 : (lvl.value < 0.0 ? -1 : 0)};
}

// ---- Hamilton-Jacobi ----

namespace {

using J2 = Jet<double, 2>;

void requirePositive(double x, const char* what) {
  if (!(x > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

}  // namespace

double hjResidualNative(double E, double k, double u, double v) {
  requirePositive(u, "u");
  requirePositive(E, "E");
  requirePositive(4.0 * E * u - k * k, "4Eu - k^2");
  const J2 U = J2::variable(u, 0, 1), V = J2::variable(v, 1, 1);
  const J2 S = pow(4.0 * E * U - k * k, 1.5) / (6.0 * E) + k * V;
  const double su = S.partial({1, 0}), sv = S.partial({0, 1});
  return (su * su + sv * sv) / (4.0 * u) - E;
}

double hjResidualRotated(double E, double lambda, double theta, double r, double s) {
  const double ct = std::cos(theta), st = std::sin(theta);
  requirePositive(E, "E");
  requirePositive(r * ct + s * st, "u");
  if (ct == 0.0 || st == 0.0) throw DomainError("theta must avoid the coordinate axes");
  requirePositive(4.0 * E * r * ct - lambda, "4Er cos(theta) - lambda");
  requirePositive(4.0 * E * s * st + lambda, "4Es sin(theta) + lambda");
  const J2 R = J2::variable(r, 0, 1), Sv = J2::variable(s, 1, 1);
  const J2 S = pow(4.0 * E * R * ct - lambda, 1.5) / (6.0 * E * ct) + pow(4.0 * E * Sv * st + lambda, 1.5) / (6.0 * E * st);
  const double sr = S.partial({1, 0}), ss = S.partial({0, 1});
  return (sr * sr + ss * ss) / (4.0 * (r * ct + s * st)) - E;
}

double hjResidualParabolic(double E, double c, double lambda, double xi, double eta, double q) {
  const double x2 = xi * xi, e2 = eta * eta;
  const double a = 2.0 * E * x2 * x2 + q * E * c * x2 - lambda;
  const double b = -2.0 * E * e2 * e2 + q * E * c * e2 + lambda;
  if (a < 0.0 || b < 0.0) throw DomainError("negative radicand in the separated action");
  const double denom = 2.0 * (x2 + e2) * (x2 - e2 + 2.0 * c);
  requirePositive(std::abs(denom), "metric factor");
  const double sx = std::sqrt(a), se = std::sqrt(b);
  return (sx * sx + se * se) / denom - E;
}

}  // namespace darboux
