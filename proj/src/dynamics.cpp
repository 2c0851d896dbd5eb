#include "darboux/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace darboux {

Eigen::Vector4d hamiltonVectorField(const PhasePointd& p, const ModelSpec& m) {
  const Gradient4 g = gradObservable(obs::H, p, m);
  return {g[2], g[3], -g[0], -g[1]};
}

PhasePointd stepMidpoint(const PhasePointd& s, const ModelSpec& m, double h, const MidpointOptions& opt) {
  if (h == 0.0 || !std::isfinite(h)) throw DomainError("step size must be finite and nonzero");
  checkDomain(s, m);
  const Eigen::Vector4d z0 = toVector(s);
  Eigen::Vector4d z1 = z0 + h * hamiltonVectorField(s, m);
  for (int it = 0; it < opt.maxIterations; ++it) {
    const Eigen::Vector4d mid = 0.5 * (z0 + z1);
    if (!(mid[0] > 0.0)) throw DomainExit("midpoint left u > 0");
    const Eigen::Vector4d next = z0 + h * hamiltonVectorField(fromVector(mid), m);
    const double scale = std::max(1.0, next.cwiseAbs().maxCoeff());
    const double change = (next - z1).cwiseAbs().maxCoeff();
    z1 = next;
    if (change <= opt.tolerance * scale) {
      if (!(z1[0] > 0.0)) throw DomainExit("step left u > 0");
      return fromVector(z1);
    }
  }
  std::ostringstream os;
  os << "fixed-point iteration did not converge in " << opt.maxIterations << " iterations (h = " << h << ")";
  throw NoConvergence(os.str());
}

Trajectory integrate(const PhasePointd& s0, const ModelSpec& m, double h, double T, const MidpointOptions& opt) {
  if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("integration time T must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("step size h must be positive");
  m.validate();
  checkDomain(s0, m);
  const auto steps = static_cast<long>(std::ceil(T / h - 1e-9));
  Trajectory t;
  t.model = m;
  t.times.reserve(steps + 1);
  t.states.reserve(steps + 1);
  t.times.push_back(0.0);
  t.states.push_back(s0);
  for (long k = 0; k < steps; ++k) {
    const double t0 = k * h;
    const double t1 = k + 1 == steps ? T : (k + 1) * h;
    try {
      t.states.push_back(stepMidpoint(t.states.back(), m, t1 - t0, opt));
    } catch (const DomainExit& e) {
      t.exitedDomain = true;
      t.exitReason = e.what();
      break;
    } catch (const DomainError& e) {
      t.exitedDomain = true;
      t.exitReason = e.what();
      break;
    }
    t.times.push_back(t1);
  }
  return t;
}

const DriftStats& ConservationReport::at(const ObservableId& o) const {
  for (const auto& e : entries)
    if (e.observable == o) return e;
  throw InvalidObservable(o.name() + " is not part of the report");
}

double ConservationReport::worstRelative() const {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.maxRelDrift);
  return w;
}

ConservationReport conservationReport(const Trajectory& t, const std::vector<ObservableId>& observables) {
  ConservationReport r;
  for (const auto& o : observables) {
    if (!isDefined(o, t.model)) throw InvalidObservable(o.name() + " is not defined for model " + t.model.name());
    DriftStats d{o, 0.0, 0.0, 0.0};
    if (!t.states.empty()) {
      d.initial = evalObservable(o, t.states.front(), t.model);
      for (const auto& s : t.states)
        d.maxAbsDrift = std::max(d.maxAbsDrift, std::abs(evalObservable(o, s, t.model) - d.initial));
      d.maxRelDrift = d.maxAbsDrift / std::max(std::abs(d.initial), 1.0);
    }
    r.entries.push_back(d);
  }
  return r;
}

}  // namespace darboux
