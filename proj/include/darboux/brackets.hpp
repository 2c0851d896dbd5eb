#pragma once

// Poisson brackets on the D1 phase space and numerical verification of the
// classical quadratic algebras.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "darboux/phase.hpp"

namespace darboux {

/// {f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i with q = (u, v).
double poissonBracket(const Gradient4& df, const Gradient4& dg);
double poissonBracket(const ObservableId& f, const ObservableId& g, const PhasePointd& p, const ModelSpec& m);

/// Central-difference Poisson bracket; the step along coordinate i is
/// h * max(1, |z_i|). Independent of the closed-form gradients.
double fdBracketOracle(const ObservableId& f, const ObservableId& g, const PhasePointd& p, const ModelSpec& m,
                       double h);

/// Phase-space jet: value plus derivatives in (u, v, pu, pv).
using PhaseJet = Jet<double, 4>;

PhasePoint<PhaseJet> phaseJet(const PhasePointd& p, int order);
/// Poisson bracket of two phase jets; the result has one order less.
PhaseJet poissonBracket(const PhaseJet& f, const PhaseJet& g);

/// R = {R1, R2} for P1 or P2 via order-2 jets, so R carries its gradient.
PhaseJet nestedBracketRJet(const PhasePointd& p, const ModelSpec& m);
double nestedBracketR(const PhasePointd& p, const ModelSpec& m);

enum class RelationId {
  Free_KX1,
  Free_KX2,
  Free_X1X2,
  Free_Casimir,
  P1_RR1,
  P1_RR2,
  P1_Rsq,
  P2_RR1,
  P2_RR2,
  P2_Rsq,
  P3_KR1,
  P3_KR2,
  P3_R1R2,
  P3_Casimir,
};

inline constexpr std::array<RelationId, 14> kAllRelations = {
    RelationId::Free_KX1, RelationId::Free_KX2, RelationId::Free_X1X2, RelationId::Free_Casimir,
    RelationId::P1_RR1,   RelationId::P1_RR2,   RelationId::P1_Rsq,    RelationId::P2_RR1,
    RelationId::P2_RR2,   RelationId::P2_Rsq,   RelationId::P3_KR1,    RelationId::P3_KR2,
    RelationId::P3_R1R2,  RelationId::P3_Casimir};

std::string relationName(RelationId r);
Potential relationPotential(RelationId r);
std::vector<RelationId> relationsFor(Potential potential);

struct RelationResidual {
  double residual = 0.0;  // |LHS - RHS|
  double scale = 1.0;     // 1 + largest |term|
  double relative() const { return residual / scale; }
};

/// Evaluates one algebra relation at p. Throws ModelMismatch when the
/// relation belongs to another potential.
RelationResidual verifyRelation(RelationId r, const PhasePointd& p, const ModelSpec& m);

struct SweepSummary {
  RelationId relation;
  std::size_t samples = 0;
  double maxRelative = 0.0;
  double maxResidual = 0.0;
  bool passed = false;
};

/// Seeded uniform sample with u in [0.2, 5], |v| <= 5, |p| <= 3. For P1 with
/// b3 != 0 points with |v| < 1e-3 are redrawn.
std::vector<PhasePointd> samplePhasePoints(std::size_t count, std::uint64_t seed, const ModelSpec& m);

SweepSummary sweepRelation(RelationId r, const ModelSpec& m, const std::vector<PhasePointd>& points,
                           double tolerance);

// ---- adjoint orbits of quadratic integrals a*X1 + b*X2 + c*K^2 (mod H) ----

struct QuadraticCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  friend bool operator==(const QuadraticCoeffs&, const QuadraticCoeffs&) = default;
};

enum class IntegralClass { X1type, X2type, K2type };
std::string className(IntegralClass c);

/// Flow generated by K for time alpha, modulo multiples of H.
QuadraticCoeffs adjointTransform(const QuadraticCoeffs& c, double alpha);
IntegralClass classifyIntegral(const QuadraticCoeffs& c);

struct NormalForm {
  IntegralClass kind;
  double alpha;           // adjoint flow parameter reaching the representative
  double scale;           // overall factor divided out
  QuadraticCoeffs coeffs; // representative X1 + aK^2, X2 + aK^2 or K^2
};
NormalForm normalForm(const QuadraticCoeffs& c);

}  // namespace darboux
