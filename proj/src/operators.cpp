#include "darboux/operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <random>
#include <sstream>

namespace darboux {

namespace {

const Complex kI(0.0, 1.0);

FieldJet coordinate(double x, int var, int order) { return FieldJet::variable(Complex(x), var, order); }

}  // namespace

FieldJet SmoothField::jet(double u, double v, int order) const {
  if (order > maxOrder) throw JetOrderExceeded("test field expanded beyond its order budget");
  return eval(coordinate(u, 0, order), coordinate(v, 1, order));
}

SmoothField operator+(const SmoothField& a, const SmoothField& b) {
  return {[a, b](const FieldJet& u, const FieldJet& v) { return a.eval(u, v) + b.eval(u, v); },
          std::min(a.maxOrder, b.maxOrder)};
}

SmoothField operator*(Complex c, const SmoothField& f) {
  return {[c, f](const FieldJet& u, const FieldJet& v) { return c * f.eval(u, v); }, f.maxOrder};
}

FieldJet composeReal(const FieldJet& x, const std::function<std::vector<double>(double, int)>& taylor) {
  const std::vector<double> t = taylor(std::real(x.value()), x.order());
  std::vector<Complex> tc(t.begin(), t.end());
  return compose(x, tc);
}

// ---- operator tree ----

struct DiffOperator::Node {
  enum class Kind { Zero, Identity, Du, Dv, Scalar, Multiply, Sum, Compose };
  Kind kind = Kind::Zero;
  Complex c{};
  Coefficient coef;
  std::string label;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  int order = 0;
};

DiffOperator::DiffOperator() : node_(std::make_shared<Node>()) {}
DiffOperator::DiffOperator(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

DiffOperator DiffOperator::zero() { return DiffOperator(); }

DiffOperator DiffOperator::identity() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Identity;
  return DiffOperator(n);
}

DiffOperator DiffOperator::du() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Du;
  n->order = 1;
  return DiffOperator(n);
}

DiffOperator DiffOperator::dv() {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Dv;
  n->order = 1;
  return DiffOperator(n);
}

DiffOperator DiffOperator::scalar(Complex c) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Scalar;
  n->c = c;
  return DiffOperator(n);
}

DiffOperator DiffOperator::multiply(Coefficient f, std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Multiply;
  n->coef = std::move(f);
  n->label = std::move(label);
  return DiffOperator(n);
}

int DiffOperator::order() const { return node_->order; }

std::string DiffOperator::str() const {
  using Kind = Node::Kind;
  const Node& n = *node_;
  std::ostringstream os;
  switch (n.kind) {
    case Kind::Zero:
      return "0";
    case Kind::Identity:
      return "1";
    case Kind::Du:
      return "d_u";
    case Kind::Dv:
      return "d_v";
    case Kind::Scalar:
      os << "(" << n.c.real() << (n.c.imag() < 0 ? "-" : "+") << std::abs(n.c.imag()) << "i)";
      return os.str();
    case Kind::Multiply:
      return "[" + n.label + "]";
    case Kind::Sum:
      return "(" + DiffOperator(n.lhs).str() + " + " + DiffOperator(n.rhs).str() + ")";
    case Kind::Compose:
      return DiffOperator(n.lhs).str() + " " + DiffOperator(n.rhs).str();
  }
  return "?";
}

FieldJet DiffOperator::applyJet(const FieldJet& f, const FieldJet& u, const FieldJet& v) const {
  using Kind = Node::Kind;
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Zero:
      return FieldJet(Complex(0.0), f.order());
    case Kind::Identity:
      return f;
    case Kind::Du:
      return f.diff(0);
    case Kind::Dv:
      return f.diff(1);
    case Kind::Scalar:
      return n.c * f;
    case Kind::Multiply:
      return n.coef(u.truncated(f.order()), v.truncated(f.order())) * f;
    case Kind::Sum:
      return DiffOperator(n.lhs).applyJet(f, u, v) + DiffOperator(n.rhs).applyJet(f, u, v);
    case Kind::Compose:
      return DiffOperator(n.lhs).applyJet(DiffOperator(n.rhs).applyJet(f, u, v), u, v);
  }
  return f;
}

DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
  using Kind = DiffOperator::Node::Kind;
  if (a.node_->kind == Kind::Zero) return b;
  if (b.node_->kind == Kind::Zero) return a;
  auto n = std::make_shared<DiffOperator::Node>();
  n->kind = Kind::Sum;
  n->lhs = a.node_;
  n->rhs = b.node_;
  n->order = std::max(a.order(), b.order());
  return DiffOperator(n);
}

DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
  using Kind = DiffOperator::Node::Kind;
  if (a.node_->kind == Kind::Zero || b.node_->kind == Kind::Zero) return DiffOperator();
  if (a.node_->kind == Kind::Identity) return b;
  if (b.node_->kind == Kind::Identity) return a;
  auto n = std::make_shared<DiffOperator::Node>();
  n->kind = Kind::Compose;
  n->lhs = a.node_;
  n->rhs = b.node_;
  n->order = a.order() + b.order();
  return DiffOperator(n);
}

DiffOperator operator*(Complex c, const DiffOperator& a) {
  if (c == Complex(1.0)) return a;
  if (c == Complex(0.0)) return DiffOperator();
  return DiffOperator::scalar(c) * a;
}

DiffOperator operator-(const DiffOperator& a) { return Complex(-1.0) * a; }
DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) { return a + (-b); }

DiffOperator commutator(const DiffOperator& a, const DiffOperator& b) { return a * b - b * a; }
DiffOperator anticommutator(const DiffOperator& a, const DiffOperator& b) { return a * b + b * a; }

DiffOperator power(const DiffOperator& a, int n) {
  if (n < 0) throw DomainError("negative operator power");
  DiffOperator r = DiffOperator::identity();
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

SmoothField apply(const DiffOperator& op, const SmoothField& f) {
  const int k = op.order();
  if (k > f.maxOrder) throw JetOrderExceeded("operator order exceeds the field's order budget");
  return {[op, f, k](const FieldJet& u, const FieldJet& v) {
            const int order = u.order() + k;
            if (order > f.maxOrder) throw JetOrderExceeded("test field expanded beyond its order budget");
            const FieldJet U = coordinate(std::real(u.value()), 0, order);
            const FieldJet V = coordinate(std::real(v.value()), 1, order);
            return op.applyJet(f.eval(U, V), U, V).truncated(u.order());
          },
          f.maxOrder - k};
}

Complex applyAt(const DiffOperator& op, const SmoothField& f, double u, double v) {
  const int k = op.order();
  const FieldJet U = coordinate(u, 0, k), V = coordinate(v, 1, k);
  return op.applyJet(f.jet(u, v, k), U, V).value();
}

// ---- quantum integrals ----

QuantumOperators quantumOperators(const ModelSpec& m) {
  m.validate();
  using D = DiffOperator;
  const D du = D::du(), dv = D::dv();
  const D lap = du * du + dv * dv;
  const auto mul = [](auto f, std::string label) { return D::multiply(f, std::move(label)); };
  const D uOp = mul([](const FieldJet& u, const FieldJet&) { return u; }, "u");
  const D vOp = mul([](const FieldJet&, const FieldJet& v) { return v; }, "v");

  const D kinetic = mul([](const FieldJet& u, const FieldJet&) { return -0.25 / u; }, "-1/(4u)") * lap;
  const D x1 = -(du * dv) + mul([](const FieldJet& u, const FieldJet& v) { return v / (2.0 * u); }, "v/(2u)") * lap;
  const D x2 = Complex(-0.5) * anticommutator(dv, vOp * du - uOp * dv) +
               mul([](const FieldJet& u, const FieldJet& v) { return v * v / (4.0 * u); }, "v^2/(4u)") * lap;
  const D k = -kI * dv;

  // Potential parts of the classical integrals: their values at zero momenta.
  const auto potentialPart = [m](const ObservableId& o) {
    return [m, o](const FieldJet& u, const FieldJet& v) {
      const FieldJet zero(Complex(0.0), u.order());
      return observableValue(o, PhasePoint<FieldJet>{u, v, zero, zero}, m);
    };
  };

  QuantumOperators q;
  q.V = m.potential == Potential::Free ? D::zero() : mul(potentialPart(obs::V), "V");
  q.H = kinetic + q.V;
  q.K = k;
  q.X1 = x1;
  q.X2 = x2;
  switch (m.potential) {
    case Potential::Free:
      q.R1 = D::zero();
      q.R2 = D::zero();
      break;
    case Potential::P1:
      q.R1 = x2 + mul(potentialPart(obs::R1), "R1|p=0");
      q.R2 = k * k + mul(potentialPart(obs::R2), "R2|p=0");
      break;
    case Potential::P2:
      q.R1 = x1 + mul(potentialPart(obs::R1), "R1|p=0");
      q.R2 = k * k + mul(potentialPart(obs::R2), "R2|p=0");
      break;
    case Potential::P3:
      q.R1 = x1 + mul(potentialPart(obs::R1), "R1|p=0");
      q.R2 = x2 + mul(potentialPart(obs::R2), "R2|p=0");
      break;
  }
  return q;
}

// ---- test fields ----

SmoothField gaussianField(double uc, double vc, double width) {
  const double s = 1.0 / (2.0 * width * width);
  return {[uc, vc, s](const FieldJet& u, const FieldJet& v) {
    const FieldJet du = u - uc, dv = v - vc;
    return exp(-s * (du * du + dv * dv));
  }};
}

std::vector<SmoothField> testFieldSuite() {
  std::vector<SmoothField> fields;
  for (double uc : {1.0, 2.0, 3.0}) {
    const SmoothField g = gaussianField(uc, 0.0, 0.5);
    fields.push_back(g);
    fields.push_back({[g](const FieldJet& u, const FieldJet& v) { return v * g.eval(u, v); }});
    fields.push_back({[g](const FieldJet& u, const FieldJet& v) { return u * v * g.eval(u, v); }});
  }
  return fields;
}

std::vector<std::pair<double, double>> interiorPoints(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> du(0.6, 3.4), dv(0.2, 1.4), sign(0.0, 1.0);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = du(rng), v = dv(rng);
    pts.emplace_back(u, sign(rng) < 0.5 ? -v : v);
  }
  return pts;
}

Complex commutatorResidual(const DiffOperator& a, const DiffOperator& b, const DiffOperator& target,
                           const SmoothField& f, double u, double v) {
  return applyAt(a * b, f, u, v) - applyAt(b * a, f, u, v) - applyAt(target, f, u, v);
}

Complex eigenResidual(const ModelSpec& m, const SmoothField& psi, double E, double u, double v) {
  if (!(u > 0.0)) throw DomainError("u must be positive");
  const QuantumOperators q = quantumOperators(m);
  return applyAt(q.H, psi, u, v) - E * psi.value(u, v);
}

// ---- relations ----

RelationCheck checkRelation(const OperatorRelation& rel, const std::vector<SmoothField>& fields,
                            const std::vector<std::pair<double, double>>& points) {
  RelationCheck out{rel.name};
  for (const auto& f : fields)
    for (const auto& [u, v] : points) {
      Complex sum(0.0);
      for (const auto& t : rel.terms) {
        const Complex x = applyAt(t, f, u, v);
        sum += x;
        out.scale = std::max(out.scale, std::abs(x));
      }
      out.maxResidual = std::max(out.maxResidual, std::abs(sum));
    }
  return out;
}

std::vector<OperatorRelation> freeRelationsPrinted() {
  const QuantumOperators q = quantumOperators(ModelSpec::free());
  const DiffOperator& H = q.H;
  const DiffOperator& K = q.K;
  const DiffOperator& X1 = q.X1;
  const DiffOperator& X2 = q.X2;
  return {
      {"[K,X1] = 2iH", {K * X1, -(X1 * K), -2.0 * kI * H}},
      {"[K,X2] = -iX1", {K * X2, -(X2 * K), kI * X1}},
      {"[X1,X2] = -2iK^3", {X1 * X2, -(X2 * X1), 2.0 * kI * power(K, 3)}},
      {"4HX2 + X1^2 + K^4 = 0", {4.0 * (H * X2), X1 * X1, power(K, 4)}},
  };
}

OperatorRelation freeX1X2Correspondence() {
  const QuantumOperators q = quantumOperators(ModelSpec::free());
  return {"[X1,X2] = 2iK^3", {q.X1 * q.X2, -(q.X2 * q.X1), -2.0 * kI * power(q.K, 3)}};
}

std::vector<CorrectedRelation> potentialQuantumRelations(const ModelSpec& m) {
  m.validate();
  const QuantumOperators q = quantumOperators(m);
  const DiffOperator& H = q.H;
  const DiffOperator& K = q.K;
  const DiffOperator& R1 = q.R1;
  const DiffOperator& R2 = q.R2;
  const DiffOperator I = DiffOperator::identity();
  const auto s = [](double x) { return Complex(x); };
  std::vector<CorrectedRelation> out;

  switch (m.potential) {
    case Potential::Free:
      throw ModelMismatch("the free model has no potential-dependent quantum relations");
    case Potential::P1:
    case Potential::P2: {
      const DiffOperator R = commutator(R1, R2);
      const std::vector<DiffOperator> basis = {I, H, R1, R2, H * H};
      const std::vector<std::string> names = {"1", "H", "R1", "R2", "H^2"};
      const DiffOperator RR1a = R * R1, RR1b = -(R1 * R), RR2a = R * R2, RR2b = -(R2 * R), RR = R * R;
      if (m.potential == Potential::P1) {
        const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
        out.push_back({"[R,R1]",
                       {RR1a, RR1b},
                       {s(-8) * (H * R1), s(-6) * (R2 * R2), s(-16 * b2) * R2, s(32 * b1 * b3) * I},
                       basis,
                       names,
                       {"[R,R1] = -6R2^2 - 8HR1 + 16b2R2 + 2b1(3+16b3)",
                        {RR1a, RR1b, s(6) * (R2 * R2), s(8) * (H * R1), s(-16 * b2) * R2,
                         s(-2 * b1 * (3 + 16 * b3)) * I}},
                       {s(32 * b1 * b3), 0, 0, s(-16 * b2), 0},
                       {s(2 * b1 * (3 + 16 * b3)), 0, 0, s(16 * b2), 0}});
        out.push_back({"[R,R2]",
                       {RR2a, RR2b},
                       {s(8) * (H * R2), s(16 * b1) * R1},
                       basis,
                       names,
                       {"[R,R2] = 8HR2 - 16b1R1", {RR2a, RR2b, s(-8) * (H * R2), s(16 * b1) * R1}},
                       {0, 0, s(16 * b1), 0, 0},
                       {0, 0, s(-16 * b1), 0, 0}});
        out.push_back(
            {"R^2",
             {RR},
             {s(8) * (H * anticommutator(R1, R2)), s(4) * power(R2, 3), s(16 * b2) * (R2 * R2),
              s(64 * b3) * (H * H), s(16 * b1) * (R1 * R1), s(-64 * b1 * b3) * R2, s(-256 * b1 * b2 * b3) * I},
             basis,
             names,
             {"R^2 = 4R2^3 - 8H[R1,R2]+ - 16b2R2^2 - 16b1R1^2 - 4b1(11+16b3)R2 - 4(3+16b3)H^2 + "
              "16b1b2(3+16b3)",
              {RR, s(-4) * power(R2, 3), s(8) * (H * anticommutator(R1, R2)), s(16 * b2) * (R2 * R2),
               s(16 * b1) * (R1 * R1), s(4 * b1 * (11 + 16 * b3)) * R2, s(4 * (3 + 16 * b3)) * (H * H),
               s(-16 * b1 * b2 * (3 + 16 * b3)) * I}},
             {s(-256 * b1 * b2 * b3), 0, 0, s(-64 * b1 * b3), s(64 * b3)},
             {s(16 * b1 * b2 * (3 + 16 * b3)), 0, 0, s(-4 * b1 * (11 + 16 * b3)), s(-4 * (3 + 16 * b3))}});
      } else {
        const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
        const double c = a2 * a2 + 4 * a1 * a3;
        out.push_back({"[R,R1]",
                       {RR1a, RR1b},
                       {s(8) * (H * H), s(-16 * a3) * R2, s(-8 * c) * I},
                       basis,
                       names,
                       {"[R,R1] = 16a3R2 + 8H^2 - 8(a2^2+4a1a3)",
                        {RR1a, RR1b, s(-16 * a3) * R2, s(-8) * (H * H), s(8 * c) * I}},
                       {s(-8 * c), 0, 0, s(-16 * a3), s(8)},
                       {s(-8 * c), 0, 0, s(16 * a3), s(8)}});
        out.push_back({"[R,R2]",
                       {RR2a, RR2b},
                       {s(-16 * a2) * H, s(16 * a3) * R1},
                       basis,
                       names,
                       {"[R,R2] = -16a3R1 + 16a2H", {RR2a, RR2b, s(16 * a3) * R1, s(-16 * a2) * H}},
                       {0, s(-16 * a2), s(16 * a3), 0, 0},
                       {0, s(16 * a2), s(-16 * a3), 0, 0}});
        out.push_back({"R^2",
                       {RR},
                       {s(-16) * (H * H * R2), s(16 * a3) * (R2 * R2), s(-32 * a2) * (H * R1),
                        s(16 * a3) * (R1 * R1), s(16 * c) * R2, s(64 * a1 * a2 * a2) * I},
                       basis,
                       names,
                       {"R^2 = -16a3R2^2 - 16a3R1^2 + 16H^2R2 + 32a2HR1 - 16(a2^2+4a1a3)R2 + 64(a3^2-a1a2^2)",
                        {RR, s(16 * a3) * (R2 * R2), s(16 * a3) * (R1 * R1), s(-16) * (H * H * R2),
                         s(-32 * a2) * (H * R1), s(16 * c) * R2, s(-64 * (a3 * a3 - a1 * a2 * a2)) * I}},
                       {s(64 * a1 * a2 * a2), 0, 0, s(16 * c), 0},
                       {s(64 * (a3 * a3 - a1 * a2 * a2)), 0, 0, s(-16 * c), 0}});
      }
      break;
    }
    case Potential::P3: {
      const double a = m.params[0];
      const std::vector<DiffOperator> basis = {I, K, K * K, H, R1, R2};
      const std::vector<std::string> names = {"1", "K", "K^2", "H", "R1", "R2"};
      const DiffOperator K2 = K * K, K3 = power(K, 3), K4 = power(K, 4);
      out.push_back({"[K,R1]",
                     {K * R1, -(R1 * K)},
                     {2.0 * kI * H},
                     basis,
                     names,
                     {"[K,R1] = 2iH", {K * R1, -(R1 * K), -2.0 * kI * H}},
                     {0, 0, 0, 2.0 * kI, 0, 0},
                     {0, 0, 0, 2.0 * kI, 0, 0}});
      out.push_back({"[K,R2]",
                     {K * R2, -(R2 * K)},
                     {-kI * R1},
                     basis,
                     names,
                     {"[K,R2] = -iR1", {K * R2, -(R2 * K), kI * R1}},
                     {0, 0, 0, 0, -kI, 0},
                     {0, 0, 0, 0, -kI, 0}});
      out.push_back({"[R1,R2]",
                     {R1 * R2, -(R2 * R1)},
                     {2.0 * kI * K3, 4.0 * kI * a * K},
                     basis,
                     names,
                     {"[R1,R2] = -2iK(K^2-2a)", {R1 * R2, -(R2 * R1), 2.0 * kI * K3, -4.0 * kI * a * K}},
                     {0, 4.0 * kI * a, 0, 0, 0, 0},
                     {0, 4.0 * kI * a, 0, 0, 0, 0}});
      out.push_back({"4HR2 + R1^2 + K^4",
                     {4.0 * (H * R2), R1 * R1, K4},
                     {s(-4 * a) * K2},
                     basis,
                     names,
                     {"4HR2 + R1^2 + K^4 - 4aK^2 = 0", {4.0 * (H * R2), R1 * R1, K4, s(-4 * a) * K2}},
                     {0, 0, s(-4 * a), 0, 0, 0},
                     {0, 0, s(4 * a), 0, 0, 0}});
      break;
    }
  }
  return out;
}

CorrectionFit fitCorrections(const CorrectedRelation& rel, const std::vector<SmoothField>& fields,
                             const std::vector<std::pair<double, double>>& points) {
  const Eigen::Index rows = static_cast<Eigen::Index>(fields.size() * points.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(rel.basis.size());
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd b(rows);
  CorrectionFit fit;
  fit.name = rel.name;
  fit.basisNames = rel.basisNames;
  Eigen::Index row = 0;
  for (const auto& f : fields)
    for (const auto& [u, v] : points) {
      Complex diff(0.0);
      for (const auto& t : rel.lhsTerms) {
        const Complex x = applyAt(t, f, u, v);
        diff += x;
        fit.scale = std::max(fit.scale, std::abs(x));
      }
      for (const auto& t : rel.skeletonTerms) {
        const Complex x = applyAt(t, f, u, v);
        diff -= x;
        fit.scale = std::max(fit.scale, std::abs(x));
      }
      for (Eigen::Index j = 0; j < cols; ++j) A(row, j) = applyAt(rel.basis[j], f, u, v);
      b(row) = diff;
      fit.residualBefore = std::max(fit.residualBefore, std::abs(diff));
      ++row;
    }
  Eigen::VectorXd norms = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j)
    if (norms(j) == 0.0) norms(j) = 1.0;
  const Eigen::MatrixXcd scaled = A * norms.cwiseInverse().asDiagonal();
  const Eigen::VectorXcd y = scaled.colPivHouseholderQr().solve(b);
  const Eigen::VectorXcd c = norms.cwiseInverse().asDiagonal() * y;
  const Eigen::VectorXcd r = b - A * c;
  fit.residualAfter = r.cwiseAbs().maxCoeff();
  fit.coefficients.assign(c.data(), c.data() + cols);
  fit.measured = fit.coefficients;
  for (std::size_t j = 0; j < fit.measured.size() && j < rel.skeletonCoeffs.size(); ++j)
    fit.measured[j] += rel.skeletonCoeffs[j];
  fit.printedCoeffs = rel.printedCoeffs;
  fit.printed = checkRelation(rel.printed, fields, points);
  return fit;
}

}  // namespace darboux
