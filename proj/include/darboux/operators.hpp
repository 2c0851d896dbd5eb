#pragma once

// Differential operators on D1 applied to smooth test fields through complex
// jets in (u, v). Commutators and operator identities come out exact up to
// rounding since no grid is involved.

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "darboux/jet.hpp"
#include "darboux/phase.hpp"

namespace darboux {

using Complex = std::complex<double>;
using FieldJet = Jet<Complex, 2>;

inline constexpr int kMaxFieldOrder = 8;

/// A complex function of (u, v) given as a composition of jet operations,
/// so it can be expanded to any order up to kMaxFieldOrder.
struct SmoothField {
  std::function<FieldJet(const FieldJet& u, const FieldJet& v)> eval;
  int maxOrder = kMaxFieldOrder;

  FieldJet jet(double u, double v, int order) const;
  Complex value(double u, double v) const { return jet(u, v, 0).value(); }
};

SmoothField operator+(const SmoothField& a, const SmoothField& b);
SmoothField operator*(Complex c, const SmoothField& f);

/// f(x) for a real univariate f given by its normalized Taylor coefficients
/// at Re x.value(); `taylor(x0, order)` must return order + 1 coefficients.
FieldJet composeReal(const FieldJet& x, const std::function<std::vector<double>(double, int)>& taylor);

/// Expression tree over d/du, d/dv, multiplication by a coefficient field,
/// scalars, sums and compositions.
class DiffOperator {
 public:
  using Coefficient = std::function<FieldJet(const FieldJet& u, const FieldJet& v)>;

  DiffOperator();  // zero operator
  static DiffOperator zero();
  static DiffOperator identity();
  static DiffOperator du();
  static DiffOperator dv();
  static DiffOperator scalar(Complex c);
  static DiffOperator multiply(Coefficient f, std::string label = "f");

  /// Upper bound on the differential order.
  int order() const;
  std::string str() const;

  /// Jet of (op F) given the jet F of the operand and the coordinate jets.
  FieldJet applyJet(const FieldJet& f, const FieldJet& u, const FieldJet& v) const;

  friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b);
  friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b);
  friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b);  // composition
  friend DiffOperator operator*(Complex c, const DiffOperator& a);
  friend DiffOperator operator-(const DiffOperator& a);

 private:
  struct Node;
  explicit DiffOperator(std::shared_ptr<const Node> n);
  std::shared_ptr<const Node> node_;
};

DiffOperator commutator(const DiffOperator& a, const DiffOperator& b);
DiffOperator anticommutator(const DiffOperator& a, const DiffOperator& b);
DiffOperator power(const DiffOperator& a, int n);

/// Applies op to f; the result keeps track of the remaining order budget.
/// Throws JetOrderExceeded when op needs more derivatives than f supports.
SmoothField apply(const DiffOperator& op, const SmoothField& f);
/// (op f)(u, v). Throws JetOrderExceeded as apply.
Complex applyAt(const DiffOperator& op, const SmoothField& f, double u, double v);

/// Quantum integrals: H, K = -i d_v, X1, X2 as displayed for the free case,
/// and R1, R2 as the free quadratic operator plus the classical potential
/// terms acting by multiplication.
struct QuantumOperators {
  DiffOperator H;
  DiffOperator V;
  DiffOperator K;
  DiffOperator X1;
  DiffOperator X2;
  DiffOperator R1;
  DiffOperator R2;
};
QuantumOperators quantumOperators(const ModelSpec& m);

/// Test-field suite: Gaussians of width 0.5 centred at u in {1, 2, 3}, v = 0,
/// times the monomials 1, v, u v.
std::vector<SmoothField> testFieldSuite();
/// exp(-((u - uc)^2 + (v - vc)^2) / (2 width^2)).
SmoothField gaussianField(double uc, double vc, double width);

/// ((A B - B A - target) f)(p).
Complex commutatorResidual(const DiffOperator& a, const DiffOperator& b, const DiffOperator& target,
                           const SmoothField& f, double u, double v);

/// (H Psi - E Psi)(p) with the model potential included.
Complex eigenResidual(const ModelSpec& m, const SmoothField& psi, double E, double u, double v);

// ---- operator relations ----

/// The relation asserts sum_k terms[k] == 0 as an operator.
struct OperatorRelation {
  std::string name;
  std::vector<DiffOperator> terms;
};

struct RelationCheck {
  std::string name;
  double maxResidual = 0.0;
  double scale = 0.0;  // max over the suite of the largest single term
  double relative() const { return scale > 0.0 ? maxResidual / scale : maxResidual; }
};

/// Evaluates a relation on every field of the suite at every point.
RelationCheck checkRelation(const OperatorRelation& rel, const std::vector<SmoothField>& fields,
                            const std::vector<std::pair<double, double>>& points);

/// Interior sample points (u, v) with u in [0.6, 3.4], 0.2 <= |v| <= 1.4.
std::vector<std::pair<double, double>> interiorPoints(std::size_t count, std::uint64_t seed);

/// Relations of the free case as printed ([K,X1] = 2iH, [K,X2] = -iX1,
/// [X1,X2] = -2iK^3, 4HX2 + X1^2 + K^4 = 0).
std::vector<OperatorRelation> freeRelationsPrinted();
/// [X1, X2] = +2iK^3, the image of {X1, X2} = 2K^3 under [.,.] = i{.,.}.
OperatorRelation freeX1X2Correspondence();

/// A quantum relation LHS = skeleton + sum_j c_j basis_j where the skeleton is
/// the quantum image of the classical relation (symmetrized products) and
/// the c_j are lower-order corrections fitted by least squares.
struct CorrectedRelation {
  std::string name;
  std::vector<DiffOperator> lhsTerms;       // summing to the left-hand side
  std::vector<DiffOperator> skeletonTerms;  // summing to the skeleton
  std::vector<DiffOperator> basis;
  std::vector<std::string> basisNames;
  /// The printed relation rearranged to sum of terms = 0.
  OperatorRelation printed;
  /// Coefficients on the basis carried by the skeleton and by the printed
  /// right-hand side.
  std::vector<Complex> skeletonCoeffs;
  std::vector<Complex> printedCoeffs;
};

struct CorrectionFit {
  std::string name;
  std::vector<Complex> coefficients;  // fitted corrections, one per basis element
  std::vector<Complex> measured;      // skeleton coefficient plus correction
  std::vector<Complex> printedCoeffs;
  std::vector<std::string> basisNames;
  double residualBefore = 0.0;  // max |LHS - skeleton|
  double residualAfter = 0.0;   // max |LHS - skeleton - fit|
  double scale = 0.0;
  double relativeAfter() const { return scale > 0.0 ? residualAfter / scale : residualAfter; }
  RelationCheck printed;  // the printed relation evaluated as is
};

/// Quantum relations of P1, P2 or P3 with their correction bases.
std::vector<CorrectedRelation> potentialQuantumRelations(const ModelSpec& m);
CorrectionFit fitCorrections(const CorrectedRelation& rel, const std::vector<SmoothField>& fields,
                             const std::vector<std::pair<double, double>>& points);

}  // namespace darboux
