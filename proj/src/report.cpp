#include "darboux/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "darboux/brackets.hpp"
#include "darboux/operators.hpp"
#include "darboux/spectra.hpp"

namespace darboux {

namespace {

using std::numbers::pi;

void dumpValue(const Json& j, std::ostringstream& os, int indent) {
  const std::string pad(indent, ' '), inner(indent + 2, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << Json(it.key()).dump() << ": ";
        dumpValue(it.value(), os, indent + 2);
      }
      os << "\n" << pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t k = 0; k < j.size(); ++k) {
        if (k) os << ",\n";
        os << inner;
        dumpValue(j[k], os, indent + 2);
      }
      os << "\n" << pad << "]";
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        os << "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      os << buf;
      return;
    }
    default:
      os << j.dump();
  }
}

Json complexJson(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

double relDelta(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Json relationCheckJson(const RelationCheck& c, double tol) {
  return Json{{"name", c.name},
              {"maxResidual", c.maxResidual},
              {"scale", c.scale},
              {"relative", c.relative()},
              {"passed", c.relative() <= tol}};
}

}  // namespace

std::string dumpJson(const Json& j) {
  std::ostringstream os;
  dumpValue(j, os, 0);
  os << "\n";
  return os.str();
}

LogLevel logLevel() {
  const char* env = std::getenv("DARBOUX_LOG");
  if (!env) return LogLevel::Quiet;
  const std::string s(env);
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  return LogLevel::Quiet;
}

void logMessage(LogLevel level, const std::string& message) {
  if (level == LogLevel::Quiet || static_cast<int>(level) > static_cast<int>(logLevel())) return;
  std::cerr << (level == LogLevel::Debug ? "[debug] " : "[info] ") << message << "\n";
}

int exitCodeFor(const Error& e) {
  switch (e.category()) {
    case Error::Category::Usage:
    case Error::Category::Domain:
      return 2;
    case Error::Category::Numeric:
      return 3;
    case Error::Category::Io:
      return 4;
  }
  return 1;
}

Potential parsePotential(const std::string& name) {
  if (name == "free") return Potential::Free;
  if (name == "p1") return Potential::P1;
  if (name == "p2") return Potential::P2;
  if (name == "p3") return Potential::P3;
  throw UsageError("--model must be one of free, p1, p2, p3 (got '" + name + "')");
}

ModelSpec parseModel(const std::string& name, const std::vector<std::string>& params, const ModelSpec& fallback) {
  const Potential pot = parsePotential(name);
  if (fallback.potential != pot) throw UsageError("fallback parameters belong to another model");
  if (params.empty()) return fallback;
  ModelSpec m{pot, std::vector<double>(expectedParamCount(pot), 0.0)};
  const std::vector<std::string> names = m.paramNames();
  std::vector<bool> seen(names.size(), false);
  for (const std::string& entry : params) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects name=value (got '" + entry + "')");
    const std::string key = entry.substr(0, eq), value = entry.substr(eq + 1);
    const auto it = std::find(names.begin(), names.end(), key);
    if (it == names.end()) throw UsageError("--param " + key + " is not a parameter of model " + name);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != value.size() || value.empty() || !std::isfinite(x))
      throw UsageError("--param " + key + " has a non-numeric value '" + value + "'");
    const std::size_t k = static_cast<std::size_t>(it - names.begin());
    m.params[k] = x;
    seen[k] = true;
  }
  std::string missing;
  for (std::size_t k = 0; k < names.size(); ++k)
    if (!seen[k]) missing += (missing.empty() ? "" : ", ") + names[k];
  if (!missing.empty()) throw UsageError("--param missing for model " + name + ": " + missing);
  return m;
}

ModelSpec sweepDefaults(Potential p) {
  switch (p) {
    case Potential::Free:
      return ModelSpec::free();
    case Potential::P1:
      return ModelSpec::p1(0.1, 0.2, 0.05);
    case Potential::P2:
      return ModelSpec::p2(0.5, 0.1, 0.1);
    case Potential::P3:
      return ModelSpec::p3(1.0);
  }
  return ModelSpec::free();
}

ModelSpec spectrumDefaults(Potential p) {
  switch (p) {
    case Potential::P1:
      return ModelSpec::p1(1.0, 0.0, 0.1875);
    case Potential::P2:
      return ModelSpec::p2(0.0, 0.3, 1.0);
    default:
      return sweepDefaults(p);
  }
}

PhasePointd traceStart(Potential p) {
  switch (p) {
    case Potential::Free:
      return {2.0, 0.5, 0.3, 0.4};
    case Potential::P1:
      return {2.0, 1.0, 0.3, 0.2};
    case Potential::P2:
    case Potential::P3:
      return {2.0, 0.5, 0.3, 0.2};
  }
  return {2.0, 0.5, 0.3, 0.4};
}

Json modelJson(const ModelSpec& m) {
  Json params = Json::object();
  const auto names = m.paramNames();
  for (std::size_t k = 0; k < names.size(); ++k) params[names[k]] = m.params[k];
  return Json{{"name", m.name()}, {"params", params}};
}

// ---- classical algebra ----

Json algebraReport(const ModelSpec& m, const AlgebraOptions& opt) {
  m.validate();
  if (opt.samples == 0) throw UsageError("--samples must be positive");
  const std::vector<PhasePointd> points = samplePhasePoints(opt.samples, opt.seed, m);
  Json r;
  r["command"] = "verify-algebra";
  r["model"] = modelJson(m);
  r["seed"] = opt.seed;
  r["samples"] = opt.samples;
  r["tolerance"] = opt.tolerance;
  Json rels = Json::array();
  bool ok = true;
  for (RelationId id : relationsFor(m.potential)) {
    logMessage(LogLevel::Debug, "sweeping " + relationName(id));
    const SweepSummary s = sweepRelation(id, m, points, opt.tolerance);
    ok = ok && s.passed;
    rels.push_back(Json{{"name", relationName(id)},
                        {"maxRelative", s.maxRelative},
                        {"maxResidual", s.maxResidual},
                        {"passed", s.passed}});
  }
  r["relations"] = rels;

  const auto ints = conservedObservables(m);
  double worst = 0.0;
  std::size_t pairs = 0;
  for (const auto& p : points)
    for (const auto& f : ints)
      for (const auto& g : ints) {
        const double exact = poissonBracket(f, g, p, m), fd = fdBracketOracle(f, g, p, m, opt.fdStep);
        const double scale = 1.0 + gradObservable(f, p, m).norm() * gradObservable(g, p, m).norm();
        worst = std::max(worst, std::abs(exact - fd) / scale);
        ++pairs;
      }
  const bool oracleOk = worst <= opt.oracleTolerance;
  r["bracketOracle"] = Json{{"fdStep", opt.fdStep},
                            {"comparisons", pairs},
                            {"maxRelative", worst},
                            {"tolerance", opt.oracleTolerance},
                            {"passed", oracleOk}};
  r["passed"] = ok && oracleOk;
  return r;
}

// ---- quantum algebra ----

Json quantumReport(const ModelSpec& m, const QuantumOptions& opt) {
  m.validate();
  const auto fields = testFieldSuite();
  const auto points = interiorPoints(opt.points, opt.seed);
  Json r;
  r["command"] = "verify-quantum";
  r["model"] = modelJson(m);
  r["seed"] = opt.seed;
  r["points"] = opt.points;
  r["fields"] = fields.size();
  bool ok = true;
  if (m.potential == Potential::Free) {
    r["tolerance"] = opt.printedTolerance;
    Json rels = Json::array();
    for (const auto& rel : freeRelationsPrinted()) {
      const RelationCheck c = checkRelation(rel, fields, points);
      ok = ok && c.relative() <= opt.printedTolerance;
      rels.push_back(relationCheckJson(c, opt.printedTolerance));
    }
    r["relations"] = rels;
    r["correspondence"] = relationCheckJson(checkRelation(freeX1X2Correspondence(), fields, points), opt.printedTolerance);
  } else {
    r["tolerance"] = opt.fitTolerance;
    Json rels = Json::array();
    for (const auto& rel : potentialQuantumRelations(m)) {
      logMessage(LogLevel::Debug, "fitting " + rel.name);
      const CorrectionFit fit = fitCorrections(rel, fields, points);
      const bool pass = fit.relativeAfter() <= opt.fitTolerance;
      ok = ok && pass;
      Json basis = Json::array();
      for (std::size_t k = 0; k < fit.basisNames.size(); ++k)
        basis.push_back(Json{{"name", fit.basisNames[k]},
                             {"measured", complexJson(fit.measured[k])},
                             {"printed", complexJson(fit.printedCoeffs[k])},
                             {"correction", complexJson(fit.coefficients[k])}});
      rels.push_back(Json{{"name", fit.name},
                          {"residualBeforeFit", fit.residualBefore},
                          {"residualAfterFit", fit.residualAfter},
                          {"scale", fit.scale},
                          {"relativeAfterFit", fit.relativeAfter()},
                          {"passed", pass},
                          {"printedRelative", fit.printed.relative()},
                          {"printedHolds", fit.printed.relative() <= opt.fitTolerance},
                          {"coefficients", basis}});
    }
    r["relations"] = rels;
  }
  r["passed"] = ok;
  return r;
}

// ---- trajectories ----

Json traceReport(const ModelSpec& m, const TraceOptions& opt, Trajectory* trajectory) {
  m.validate();
  if (!(opt.h > 0.0) || !(opt.T > 0.0)) throw UsageError("--h and --T must be positive");
  const auto observables = conservedObservables(m);
  const Trajectory t = integrate(opt.start, m, opt.h, opt.T);
  const Trajectory half = integrate(opt.start, m, 0.5 * opt.h, opt.T);
  const ConservationReport rep = conservationReport(t, observables);
  const ConservationReport repHalf = conservationReport(half, {obs::H});
  Json r;
  r["command"] = "trace";
  r["model"] = modelJson(m);
  r["start"] = Json::array({opt.start.u, opt.start.v, opt.start.pu, opt.start.pv});
  r["h"] = opt.h;
  r["T"] = opt.T;
  r["steps"] = t.states.size() - 1;
  r["exitedDomain"] = t.exitedDomain || half.exitedDomain;
  r["tolerance"] = opt.tolerance;
  Json drifts = Json::array();
  bool ok = !t.exitedDomain && !half.exitedDomain;
  for (const auto& d : rep.entries) {
    const bool pass = d.maxRelDrift <= opt.tolerance;
    ok = ok && pass;
    drifts.push_back(Json{{"observable", d.observable.name()},
                          {"initial", d.initial},
                          {"maxAbsDrift", d.maxAbsDrift},
                          {"maxRelDrift", d.maxRelDrift},
                          {"passed", pass}});
  }
  r["drifts"] = drifts;
  const double a = rep.at(obs::H).maxAbsDrift, b = repHalf.at(obs::H).maxAbsDrift;
  const double ratio = b > 0.0 ? a / b : 0.0;
  const bool ratioOk = ratio >= opt.ratioLo && ratio <= opt.ratioHi;
  r["halving"] = Json{{"hDrift", a}, {"halfStepHDrift", b}, {"ratio", ratio}, {"window", {opt.ratioLo, opt.ratioHi}},
                      {"passed", ratioOk}};
  r["passed"] = ok && ratioOk;
  if (trajectory) *trajectory = t;
  return r;
}

void writeTrajectoryCsv(const Trajectory& t, std::ostream& os) {
  os << "t,u,v,pu,pv\n";
  char buf[256];
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    const PhasePointd& p = t.states[k];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t.times[k], p.u, p.v, p.pu, p.pv);
    os << buf;
  }
}

// ---- spectra ----

Json spectrumReport(const ModelSpec& m, const SpectrumOptions& opt) {
  m.validate();
  if (opt.levels < 1) throw UsageError("--levels must be positive");
  Json r;
  r["command"] = "spectrum";
  r["model"] = modelJson(m);
  r["levels"] = opt.levels;
  r["tolerance"] = opt.tolerance;
  bool ok = true;
  if (m.potential == Potential::P1) {
    const P1Spectral s = p1Spectral(m);
    r["beta"] = s.beta;
    r["gamma"] = s.gamma;
    r["boundary"] = "Dirichlet at u = 1/2; v in (0, 2 pi] with V(2 pi) = 0";
    const SpectralProblem vp = p1vProblem(s.beta, s.gamma);
    Json vl = Json::array();
    for (int n = 0; n < opt.levels; ++n) {
      const double mu = quantizeP1v(s.beta, s.gamma, n), num = numerovEigen(vp, n).value;
      ok = ok && relDelta(mu, num) <= opt.tolerance;
      vl.push_back(Json{{"n", n}, {"mu", mu}, {"numerov", num}, {"relDelta", relDelta(mu, num)}});
    }
    r["separationConstants"] = vl;
    const double mu0 = quantizeP1v(s.beta, s.gamma, 0);
    r["mu0"] = mu0;
    const SpectralProblem up = p1uProblem(s.beta, s.b2, mu0);
    Json el = Json::array();
    for (int n = 0; n < opt.levels; ++n) {
      const double e = quantizeP1u(s.beta, s.b2, mu0, n), num = numerovEigen(up, n).value;
      ok = ok && relDelta(e, num) <= opt.tolerance;
      el.push_back(Json{{"n", n},
                        {"E", e},
                        {"nu", p1Index(s.beta, s.b2, mu0, e)},
                        {"numerov", num},
                        {"relDelta", relDelta(e, num)}});
    }
    r["energies"] = el;
  } else if (m.potential == Potential::P2) {
    const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
    if (!(a3 > 0.0)) throw SpectrumUnbounded("a3 <= 0 leaves the separated problems without a decaying channel");
    const double alpha = std::sqrt(a3), w0 = -pi;
    r["alpha"] = alpha;
    r["boundary"] = "Dirichlet at u = 1/2; V periodic on [-pi, pi]";
    const SpectralProblem vp = p2vProblem(alpha, a2, w0);
    Json vl = Json::array();
    for (int n = 0; n < opt.levels; ++n) {
      const double k = quantizeP2v(alpha, a2, n, w0), num = numerovEigen(vp, n).value;
      ok = ok && relDelta(k, num) <= opt.tolerance;
      vl.push_back(Json{{"n", n},
                        {"kappa", k},
                        {"nu", p2vIndex(alpha, a2, k)},
                        {"numerov", num},
                        {"relDelta", relDelta(k, num)}});
    }
    r["separationConstants"] = vl;
    const double kappa0 = quantizeP2v(alpha, a2, 0, w0);
    r["kappa0"] = kappa0;
    const SpectralProblem up = p2uProblem(alpha, a1, kappa0);
    Json el = Json::array();
    for (int n = 0; n < opt.levels; ++n) {
      const double e = quantizeP2u(alpha, a1, kappa0, n), num = numerovEigen(up, n).value;
      ok = ok && relDelta(e, num) <= opt.tolerance;
      el.push_back(Json{{"n", n},
                        {"E", e},
                        {"rho", p2uIndex(alpha, a1, kappa0, e)},
                        {"numerov", num},
                        {"relDelta", relDelta(e, num)}});
    }
    r["energies"] = el;
  } else {
    throw SpectrumUnbounded("model " + m.name() + " has no confined bound-state problem");
  }
  r["passed"] = ok;
  return r;
}

// ---- embeddings ----

Json embedReport(Signature s, const EmbedOptions& opt) {
  const double u0 = s == Signature::Euclidean ? 0.6 : 0.1, u1 = 3.0;
  const GridResidual g = metricResidualGrid(s, u0, u1, 0.0, 2.0 * pi, opt.nu, opt.nv, opt.h);
  Json r;
  r["command"] = "embed";
  r["surface"] = signatureName(s);
  r["grid"] = Json{{"u", {u0, u1}}, {"v", {0.0, 2.0 * pi}}, {"nu", opt.nu}, {"nv", opt.nv}};
  r["h"] = opt.h;
  r["tolerance"] = opt.tolerance;
  r["maxResidual"] = g.maxResidual;
  r["worst"] = Json{{"u", g.worstU}, {"v", g.worstV}};
  bool ok = g.maxResidual <= opt.tolerance;
  if (s == Signature::Euclidean) {
    double worst = 0.0;
    for (int i = 0; i < opt.nu; ++i) {
      const double u = u0 + (u1 - u0) * i / (opt.nu - 1);
      worst = std::max(worst, std::abs(embeddingZClosedForm(u) - embeddingZ(u)));
    }
    r["closedFormMaxDelta"] = worst;
  } else {
    const double point = inducedMetricResidual(s, 1.0, 2.0, 1e-5);
    const bool pointOk = point <= 1e-8;
    r["identityAt"] = Json{{"u", 1.0}, {"v", 2.0}, {"h", 1e-5}, {"residual", point}, {"tolerance", 1e-8},
                           {"passed", pointOk}};
    ok = ok && pointOk;
  }
  r["passed"] = ok;
  return r;
}

// ---- Hamilton-Jacobi ----

Json hjReport(const HjOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  const auto uni = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  double native = 0.0, rotated = 0.0, printed = 0.0, rederived = 0.0;
  for (std::size_t k = 0; k < opt.samples; ++k) {
    const double E = uni(0.5, 2.0);
    const double kk = uni(-1.0, 1.0);
    const double u = kk * kk / (4.0 * E) + uni(0.1, 3.0);
    native = std::max(native, std::abs(hjResidualNative(E, kk, u, uni(-2.0, 2.0))));

    const double theta = uni(0.2, 1.3), lambda = uni(-0.5, 0.5);
    const double r = (std::abs(lambda) + 0.1) / (4.0 * E * std::cos(theta)) + uni(0.0, 2.0);
    const double s = (std::abs(lambda) + 0.1) / (4.0 * E * std::sin(theta)) + uni(0.0, 2.0);
    rotated = std::max(rotated, std::abs(hjResidualRotated(E, lambda, theta, r, s)));

    const double c = uni(0.2, 1.0), xi = uni(0.5, 2.0), eta = uni(0.05, 0.4);
    for (double q : {2.0, 4.0}) {
      const double lo = 2.0 * E * std::pow(eta, 4) - q * E * c * eta * eta;
      const double hi = 2.0 * E * std::pow(xi, 4) + q * E * c * xi * xi;
      const double lam = lo + (hi - lo) * 0.5;
      const double res = std::abs(hjResidualParabolic(E, c, lam, xi, eta, q));
      (q == 2.0 ? printed : rederived) = std::max(q == 2.0 ? printed : rederived, res);
    }
  }
  Json rep;
  rep["command"] = "hj-check";
  rep["seed"] = opt.seed;
  rep["samples"] = opt.samples;
  rep["tolerance"] = opt.tolerance;
  const bool nOk = native <= opt.tolerance, rOk = rotated <= opt.tolerance;
  rep["native"] = Json{{"maxResidual", native}, {"passed", nOk}};
  rep["rotated"] = Json{{"maxResidual", rotated}, {"passed", rOk}};
  rep["parabolic"] = Json{{"coefficient2", Json{{"maxResidual", printed}, {"holds", printed <= opt.tolerance}}},
                          {"coefficient4", Json{{"maxResidual", rederived}, {"holds", rederived <= opt.tolerance}}}};
  rep["passed"] = nOk && rOk;
  return rep;
}

}  // namespace darboux
