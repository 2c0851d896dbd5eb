#include "darboux/brackets.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>

namespace darboux {

double poissonBracket(const Gradient4& df, const Gradient4& dg) {
  // Grouped so that swapping f and g negates the result exactly.
  return (df[0] * dg[2] + df[1] * dg[3]) - (df[2] * dg[0] + df[3] * dg[1]);
}

double poissonBracket(const ObservableId& f, const ObservableId& g, const PhasePointd& p, const ModelSpec& m) {
  return poissonBracket(gradObservable(f, p, m), gradObservable(g, p, m));
}

double fdBracketOracle(const ObservableId& f, const ObservableId& g, const PhasePointd& p, const ModelSpec& m,
                       double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  const Eigen::Vector4d z = toVector(p);
  Gradient4 df, dg;
  for (int i = 0; i < 4; ++i) {
    const double step = h * std::max(1.0, std::abs(z[i]));
    Eigen::Vector4d zp = z, zm = z;
    zp[i] += step;
    zm[i] -= step;
    if (i == 0 && !(zm[0] > 0.0)) throw DomainError("finite-difference stencil leaves u > 0");
    const PhasePointd pp = fromVector(zp), pm = fromVector(zm);
    df[i] = (evalObservable(f, pp, m) - evalObservable(f, pm, m)) / (2 * step);
    dg[i] = (evalObservable(g, pp, m) - evalObservable(g, pm, m)) / (2 * step);
  }
  return poissonBracket(df, dg);
}

PhasePoint<PhaseJet> phaseJet(const PhasePointd& p, int order) {
  return {PhaseJet::variable(p.u, 0, order), PhaseJet::variable(p.v, 1, order),
          PhaseJet::variable(p.pu, 2, order), PhaseJet::variable(p.pv, 3, order)};
}

PhaseJet poissonBracket(const PhaseJet& f, const PhaseJet& g) {
  return f.diff(0) * g.diff(2) - f.diff(2) * g.diff(0) + f.diff(1) * g.diff(3) - f.diff(3) * g.diff(1);
}

namespace {

Gradient4 gradientOf(const PhaseJet& j) {
  const PhaseJet d0 = j.truncated(1);
  return {d0.coeff({1, 0, 0, 0}), d0.coeff({0, 1, 0, 0}), d0.coeff({0, 0, 1, 0}), d0.coeff({0, 0, 0, 1})};
}

void requireR(const ModelSpec& m) {
  if (m.potential != Potential::P1 && m.potential != Potential::P2)
    throw ModelMismatch("R = {R1, R2} is used for P1 and P2 only");
}

double maxAbs(std::initializer_list<double> terms) {
  double s = 0.0;
  for (double t : terms) s = std::max(s, std::abs(t));
  return s;
}

RelationResidual residualOf(double lhs, double rhs, std::initializer_list<double> terms) {
  return {std::abs(lhs - rhs), 1.0 + maxAbs(terms)};
}

}  // namespace

PhaseJet nestedBracketRJet(const PhasePointd& p, const ModelSpec& m) {
  requireR(m);
  m.validate();
  checkDomain(p, m);
  const auto z = phaseJet(p, 2);
  const PhaseJet r1 = observableValue(obs::R1, z, m);
  const PhaseJet r2 = observableValue(obs::R2, z, m);
  return poissonBracket(r1, r2);
}

double nestedBracketR(const PhasePointd& p, const ModelSpec& m) { return nestedBracketRJet(p, m).value(); }

std::string relationName(RelationId r) {
  switch (r) {
    case RelationId::Free_KX1:
      return "Free_KX1";
    case RelationId::Free_KX2:
      return "Free_KX2";
    case RelationId::Free_X1X2:
      return "Free_X1X2";
    case RelationId::Free_Casimir:
      return "Free_Casimir";
    case RelationId::P1_RR1:
      return "P1_RR1";
    case RelationId::P1_RR2:
      return "P1_RR2";
    case RelationId::P1_Rsq:
      return "P1_Rsq";
    case RelationId::P2_RR1:
      return "P2_RR1";
    case RelationId::P2_RR2:
      return "P2_RR2";
    case RelationId::P2_Rsq:
      return "P2_Rsq";
    case RelationId::P3_KR1:
      return "P3_KR1";
    case RelationId::P3_KR2:
      return "P3_KR2";
    case RelationId::P3_R1R2:
      return "P3_R1R2";
    case RelationId::P3_Casimir:
      return "P3_Casimir";
  }
  return "?";
}

Potential relationPotential(RelationId r) {
  switch (r) {
    case RelationId::Free_KX1:
    case RelationId::Free_KX2:
    case RelationId::Free_X1X2:
    case RelationId::Free_Casimir:
      return Potential::Free;
    case RelationId::P1_RR1:
    case RelationId::P1_RR2:
    case RelationId::P1_Rsq:
      return Potential::P1;
    case RelationId::P2_RR1:
    case RelationId::P2_RR2:
    case RelationId::P2_Rsq:
      return Potential::P2;
    default:
      return Potential::P3;
  }
}

std::vector<RelationId> relationsFor(Potential potential) {
  std::vector<RelationId> out;
  for (RelationId r : kAllRelations)
    if (relationPotential(r) == potential) out.push_back(r);
  return out;
}

RelationResidual verifyRelation(RelationId r, const PhasePointd& p, const ModelSpec& m) {
  if (relationPotential(r) != m.potential)
    throw ModelMismatch(relationName(r) + " requires model " + potentialName(relationPotential(r)) + ", got " +
                        m.name());
  m.validate();
  checkDomain(p, m);
  const double H = observableValue(obs::H, p, m);
  const double K = p.pv;

  switch (r) {
    case RelationId::Free_KX1: {
      const double lhs = poissonBracket(obs::K, obs::X1, p, m);
      return residualOf(lhs, 2 * H, {lhs, 2 * H});
    }
    case RelationId::Free_KX2: {
      const double lhs = poissonBracket(obs::K, obs::X2, p, m);
      const double x1 = freeX1(p);
      return residualOf(lhs, -x1, {lhs, x1});
    }
    case RelationId::Free_X1X2: {
      const double lhs = poissonBracket(obs::X1, obs::X2, p, m);
      return residualOf(lhs, 2 * K * K * K, {lhs, 2 * K * K * K});
    }
    case RelationId::Free_Casimir: {
      const double x1 = freeX1(p), x2 = freeX2(p);
      const double t1 = 4 * H * x2, t2 = x1 * x1, t3 = K * K * K * K;
      return residualOf(t1 + t2 + t3, 0.0, {t1, t2, t3});
    }
    case RelationId::P3_KR1: {
      const double lhs = poissonBracket(obs::K, obs::R1, p, m);
      return residualOf(lhs, 2 * H, {lhs, 2 * H});
    }
    case RelationId::P3_KR2: {
      const double lhs = poissonBracket(obs::K, obs::R2, p, m);
      const double r1 = observableValue(obs::R1, p, m);
      return residualOf(lhs, -r1, {lhs, r1});
    }
    case RelationId::P3_R1R2: {
      const double a = m.params[0];
      const double lhs = poissonBracket(obs::R1, obs::R2, p, m);
      const double t1 = 2 * K * K * K, t2 = 4 * a * K;
      return residualOf(lhs, t1 + t2, {lhs, t1, t2});
    }
    case RelationId::P3_Casimir: {
      const double a = m.params[0];
      const double r1 = observableValue(obs::R1, p, m), r2 = observableValue(obs::R2, p, m);
      const double t1 = 4 * H * r2, t2 = r1 * r1, t3 = K * K * K * K, t4 = 4 * a * K * K;
      return residualOf(t1 + t2 + t3 + t4, 0.0, {t1, t2, t3, t4});
    }
    default:
      break;
  }

  // Relations involving R = {R1, R2}.
  const PhaseJet rj = nestedBracketRJet(p, m);
  const double R = rj.value();
  const Gradient4 dR = gradientOf(rj);
  const double r1 = observableValue(obs::R1, p, m), r2 = observableValue(obs::R2, p, m);

  if (m.potential == Potential::P1) {
    const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
    switch (r) {
      case RelationId::P1_RR1: {
        const double lhs = poissonBracket(dR, gradObservable(obs::R1, p, m));
        const double t1 = 8 * H * r1, t2 = 6 * r2 * r2, t3 = 16 * b2 * r2, t4 = -32 * b1 * b3;
        return residualOf(lhs, t1 + t2 + t3 + t4, {lhs, t1, t2, t3, t4});
      }
      case RelationId::P1_RR2: {
        const double lhs = poissonBracket(dR, gradObservable(obs::R2, p, m));
        const double t1 = -8 * H * r2, t2 = -16 * b1 * r1;
        return residualOf(lhs, t1 + t2, {lhs, t1, t2});
      }
      case RelationId::P1_Rsq: {
        const double lhs = R * R;
        const double t1 = -16 * H * r1 * r2, t2 = -4 * r2 * r2 * r2, t3 = -16 * b2 * r2 * r2,
                     t4 = -64 * b3 * H * H, t5 = -16 * b1 * r1 * r1, t6 = 64 * b1 * b3 * r2,
                     t7 = 256 * b1 * b2 * b3;
        return residualOf(lhs, t1 + t2 + t3 + t4 + t5 + t6 + t7, {lhs, t1, t2, t3, t4, t5, t6, t7});
      }
      default:
        break;
    }
  } else {
    const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
    const double c = a2 * a2 + 4 * a1 * a3;
    switch (r) {
      case RelationId::P2_RR1: {
        const double lhs = poissonBracket(dR, gradObservable(obs::R1, p, m));
        const double t1 = -8 * H * H, t2 = 16 * a3 * r2, t3 = 8 * c;
        return residualOf(lhs, t1 + t2 + t3, {lhs, t1, t2, t3});
      }
      case RelationId::P2_RR2: {
        const double lhs = poissonBracket(dR, gradObservable(obs::R2, p, m));
        const double t1 = 16 * a2 * H, t2 = -16 * a3 * r1;
        return residualOf(lhs, t1 + t2, {lhs, t1, t2});
      }
      case RelationId::P2_Rsq: {
        const double lhs = R * R;
        const double t1 = 16 * H * H * r2, t2 = -16 * a3 * r2 * r2, t3 = 32 * a2 * H * r1,
                     t4 = -16 * a3 * r1 * r1, t5 = -16 * c * r2, t6 = -64 * a1 * a2 * a2;
        return residualOf(lhs, t1 + t2 + t3 + t4 + t5 + t6, {lhs, t1, t2, t3, t4, t5, t6});
      }
      default:
        break;
    }
  }
  throw ModelMismatch("unhandled relation " + relationName(r));
}

std::vector<PhasePointd> samplePhasePoints(std::size_t count, std::uint64_t seed, const ModelSpec& m) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> du(0.2, 5.0), dv(-5.0, 5.0), dp(-3.0, 3.0);
  const bool avoidV0 = m.potential == Potential::P1 && m.params.size() == 3 && m.params[2] != 0.0;
  std::vector<PhasePointd> pts;
  pts.reserve(count);
  while (pts.size() < count) {
    PhasePointd p{du(rng), dv(rng), dp(rng), dp(rng)};
    if (avoidV0 && std::abs(p.v) < 1e-3) continue;
    pts.push_back(p);
  }
  return pts;
}

SweepSummary sweepRelation(RelationId r, const ModelSpec& m, const std::vector<PhasePointd>& points,
                           double tolerance) {
  SweepSummary s{r, points.size(), 0.0, 0.0, false};
  for (const auto& p : points) {
    const RelationResidual res = verifyRelation(r, p, m);
    s.maxRelative = std::max(s.maxRelative, res.relative());
    s.maxResidual = std::max(s.maxResidual, res.residual);
  }
  s.passed = s.maxRelative <= tolerance;
  return s;
}

std::string className(IntegralClass c) {
  switch (c) {
    case IntegralClass::X1type:
      return "X1type";
    case IntegralClass::X2type:
      return "X2type";
    case IntegralClass::K2type:
      return "K2type";
  }
  return "?";
}

QuadraticCoeffs adjointTransform(const QuadraticCoeffs& c, double alpha) {
  // X1 -> X1 + 2 alpha H and X2 -> X2 - alpha X1 - alpha^2 H, dropping H.
  return {c.a - c.b * alpha, c.b, c.c};
}

IntegralClass classifyIntegral(const QuadraticCoeffs& c) {
  if (c.a == 0.0 && c.b == 0.0 && c.c == 0.0) throw ZeroObservable("all coefficients vanish");
  if (c.b != 0.0) return IntegralClass::X2type;
  if (c.a != 0.0) return IntegralClass::X1type;
  return IntegralClass::K2type;
}

NormalForm normalForm(const QuadraticCoeffs& c) {
  const IntegralClass kind = classifyIntegral(c);
  switch (kind) {
    case IntegralClass::X2type: {
      const double alpha = c.a / c.b;
      const QuadraticCoeffs t = adjointTransform(c, alpha);
      return {kind, alpha, c.b, {0.0, 1.0, t.c / c.b}};
    }
    case IntegralClass::X1type:
      return {kind, 0.0, c.a, {1.0, 0.0, c.c / c.a}};
    case IntegralClass::K2type:
      return {kind, 0.0, c.c, {0.0, 0.0, 1.0}};
  }
  return {kind, 0.0, 1.0, c};
}

}  // namespace darboux
