#include "darboux/phase.hpp"

#include <sstream>

namespace darboux {

std::size_t expectedParamCount(Potential potential) {
  switch (potential) {
    case Potential::Free:
      return 0;
    case Potential::P1:
    case Potential::P2:
      return 3;
    case Potential::P3:
      return 1;
  }
  return 0;
}

std::string potentialName(Potential potential) {
  switch (potential) {
    case Potential::Free:
      return "free";
    case Potential::P1:
      return "p1";
    case Potential::P2:
      return "p2";
    case Potential::P3:
      return "p3";
  }
  return "?";
}

void ModelSpec::validate() const {
  if (params.size() != expectedParamCount(potential)) {
    std::ostringstream os;
    os << potentialName(potential) << " expects " << expectedParamCount(potential) << " parameters, got "
       << params.size();
    throw DomainError(os.str());
  }
  for (double x : params)
    if (!std::isfinite(x)) throw DomainError("non-finite model parameter");
}

std::string ModelSpec::name() const { return potentialName(potential); }

std::vector<std::string> ModelSpec::paramNames() const {
  switch (potential) {
    case Potential::Free:
      return {};
    case Potential::P1:
      return {"b1", "b2", "b3"};
    case Potential::P2:
      return {"a1", "a2", "a3"};
    case Potential::P3:
      return {"a"};
  }
  return {};
}

std::string ObservableId::name() const {
  switch (tag) {
    case Tag::H:
      return "H";
    case Tag::V:
      return "V";
    case Tag::K:
      return "K";
    case Tag::X1:
      return "X1";
    case Tag::X2:
      return "X2";
    case Tag::R1:
      return "R1";
    case Tag::R2:
      return "R2";
    case Tag::LinearCombo: {
      std::ostringstream os;
      os << a << "*X1+" << b << "*X2+" << c << "*K^2";
      return os.str();
    }
  }
  return "?";
}

bool isDefined(const ObservableId& o, const ModelSpec& m) {
  using Tag = ObservableId::Tag;
  if (o.tag == Tag::R1 || o.tag == Tag::R2) return m.potential != Potential::Free;
  if (o.tag == Tag::LinearCombo) return std::isfinite(o.a) && std::isfinite(o.b) && std::isfinite(o.c);
  return true;
}

std::vector<ObservableId> conservedObservables(const ModelSpec& m) {
  switch (m.potential) {
    case Potential::Free:
      return {obs::H, obs::K, obs::X1, obs::X2};
    case Potential::P1:
    case Potential::P2:
      return {obs::H, obs::R1, obs::R2};
    case Potential::P3:
      return {obs::H, obs::K, obs::R1, obs::R2};
  }
  return {};
}

namespace {

void checkObservable(const ObservableId& o, const ModelSpec& m) {
  m.validate();
  if (!isDefined(o, m)) throw InvalidObservable(o.name() + " is not defined for model " + m.name());
}

// Partials of the potential with respect to (u, v).
Eigen::Vector2d potentialGradient(const PhasePointd& p, const ModelSpec& m) {
  const double u = p.u, v = p.v;
  switch (m.potential) {
    case Potential::Free:
      return {0.0, 0.0};
    case Potential::P1: {
      const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
      double du = b1 - b1 * v * v / (4 * u * u) - b2 / (u * u);
      double dv = b1 * v / (2 * u);
      if (b3 != 0.0) {
        du -= b3 / (u * u * v * v);
        dv -= 2 * b3 / (u * v * v * v);
      }
      return {du, dv};
    }
    case Potential::P2: {
      const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
      return {-a1 / (u * u) - a2 * v / (u * u) + a3 - a3 * v * v / (u * u), a2 / u + 2 * a3 * v / u};
    }
    case Potential::P3:
      return {-m.params[0] / (u * u), 0.0};
  }
  return {0.0, 0.0};
}

Gradient4 gradX1(const PhasePointd& p) {
  const double u = p.u, v = p.v, pu = p.pu, pv = p.pv, t = pu * pu + pv * pv;
  return {v * t / (2 * u * u), -t / (2 * u), pv - v * pu / u, pu - v * pv / u};
}

Gradient4 gradX2(const PhasePointd& p) {
  const double u = p.u, v = p.v, pu = p.pu, pv = p.pv, t = pu * pu + pv * pv;
  return {-pv * pv + v * v * t / (4 * u * u), pu * pv - v * t / (2 * u), v * pv - v * v * pu / (2 * u),
          v * pu - 2 * u * pv - v * v * pv / (2 * u)};
}

}  // namespace

double evalObservable(const ObservableId& o, const PhasePointd& p, const ModelSpec& m) {
  checkObservable(o, m);
  checkDomain(p, m);
  return observableValue(o, p, m);
}

double evalHamiltonian(const PhasePointd& p, const ModelSpec& m) { return evalObservable(obs::H, p, m); }

Gradient4 gradObservable(const ObservableId& o, const PhasePointd& p, const ModelSpec& m) {
  using Tag = ObservableId::Tag;
  checkObservable(o, m);
  checkDomain(p, m);
  const double u = p.u, v = p.v, pu = p.pu, pv = p.pv;
  switch (o.tag) {
    case Tag::H: {
      const Eigen::Vector2d dV = potentialGradient(p, m);
      return {-(pu * pu + pv * pv) / (4 * u * u) + dV[0], dV[1], pu / (2 * u), pv / (2 * u)};
    }
    case Tag::V: {
      const Eigen::Vector2d dV = potentialGradient(p, m);
      return {dV[0], dV[1], 0.0, 0.0};
    }
    case Tag::K:
      return {0.0, 0.0, 0.0, 1.0};
    case Tag::X1:
      return gradX1(p);
    case Tag::X2:
      return gradX2(p);
    case Tag::LinearCombo:
      return o.a * gradX1(p) + o.b * gradX2(p) + o.c * Gradient4(0.0, 0.0, 0.0, 2 * pv);
    case Tag::R1:
      switch (m.potential) {
        case Potential::P1: {
          const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
          Gradient4 g = gradX2(p);
          g[0] += b1 * std::pow(v, 4) / (4 * u * u) + b2 * v * v / (u * u);
          g[1] += -b1 * v * v * v / u - 2 * b2 * v / u;
          if (b3 != 0.0) {
            g[0] += -4 * b3 / (v * v) + b3 / (u * u);
            g[1] += 8 * b3 * u / (v * v * v);
          }
          return g;
        }
        case Potential::P2: {
          const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
          Gradient4 g = gradX1(p);
          g[0] += 2 * a1 * v / (u * u) + 2 * a2 + 2 * a2 * v * v / (u * u) + 2 * a3 * v +
                  2 * a3 * v * v * v / (u * u);
          g[1] += -2 * a1 / u - 4 * a2 * v / u + 2 * a3 * u - 6 * a3 * v * v / u;
          return g;
        }
        case Potential::P3: {
          const double a = m.params[0];
          Gradient4 g = gradX1(p);
          g[0] += 2 * a * v / (u * u);
          g[1] += -2 * a / u;
          return g;
        }
        case Potential::Free:
          break;
      }
      break;
    case Tag::R2:
      switch (m.potential) {
        case Potential::P1: {
          const double b1 = m.params[0], b3 = m.params[2];
          double dv = 2 * b1 * v;
          if (b3 != 0.0) dv -= 8 * b3 / (v * v * v);
          return {0.0, dv, 0.0, 2 * pv};
        }
        case Potential::P2: {
          const double a2 = m.params[1], a3 = m.params[2];
          return {0.0, 4 * a2 + 8 * a3 * v, 0.0, 2 * pv};
        }
        case Potential::P3: {
          const double a = m.params[0];
          Gradient4 g = gradX2(p);
          g[0] += a * v * v / (u * u);
          g[1] += -2 * a * v / u;
          return g;
        }
        case Potential::Free:
          break;
      }
      break;
  }
  throw InvalidObservable(o.name() + " is not defined for model " + m.name());
}

}  // namespace darboux
