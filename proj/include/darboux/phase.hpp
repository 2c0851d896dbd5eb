#pragma once

// Phase space of the Darboux space D1, ds^2 = 2u (du^2 + dv^2), its
// superintegrable potentials and the closed-form integrals of motion.
//
// Observables are templated on the scalar so the same formulas evaluate on
// doubles and on Jet<> values (used for nested Poisson brackets).

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "darboux/errors.hpp"
#include "darboux/jet.hpp"

namespace darboux {

template <typename Scalar>
struct PhasePoint {
  Scalar u;
  Scalar v;
  Scalar pu;
  Scalar pv;
};

using PhasePointd = PhasePoint<double>;
using Gradient4 = Eigen::Vector4d;

inline Eigen::Vector4d toVector(const PhasePointd& p) { return {p.u, p.v, p.pu, p.pv}; }
inline PhasePointd fromVector(const Eigen::Vector4d& z) { return {z[0], z[1], z[2], z[3]}; }

enum class Potential { Free, P1, P2, P3 };

/// Potential variant plus its real coupling constants:
/// P1 {b1, b2, b3}, P2 {a1, a2, a3}, P3 {a}.
struct ModelSpec {
  Potential potential = Potential::Free;
  std::vector<double> params;

  static ModelSpec free() { return {Potential::Free, {}}; }
  static ModelSpec p1(double b1, double b2, double b3) { return {Potential::P1, {b1, b2, b3}}; }
  static ModelSpec p2(double a1, double a2, double a3) { return {Potential::P2, {a1, a2, a3}}; }
  static ModelSpec p3(double a) { return {Potential::P3, {a}}; }

  /// Throws DomainError when the parameter list does not fit the variant.
  void validate() const;
  double param(std::size_t i) const { return params.at(i); }
  std::string name() const;
  /// Names of the parameters of this variant, in order.
  std::vector<std::string> paramNames() const;
};

std::size_t expectedParamCount(Potential potential);
std::string potentialName(Potential potential);

struct ObservableId {
  enum class Tag { H, V, K, X1, X2, R1, R2, LinearCombo };
  Tag tag = Tag::H;
  // a*X1 + b*X2 + c*K^2 for LinearCombo; unused otherwise.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static ObservableId of(Tag t) { return {t, 0.0, 0.0, 0.0}; }
  static ObservableId combo(double a, double b, double c) { return {Tag::LinearCombo, a, b, c}; }
  std::string name() const;
  friend bool operator==(const ObservableId&, const ObservableId&) = default;
};

namespace obs {
inline const ObservableId H = ObservableId::of(ObservableId::Tag::H);
inline const ObservableId V = ObservableId::of(ObservableId::Tag::V);
inline const ObservableId K = ObservableId::of(ObservableId::Tag::K);
inline const ObservableId X1 = ObservableId::of(ObservableId::Tag::X1);
inline const ObservableId X2 = ObservableId::of(ObservableId::Tag::X2);
inline const ObservableId R1 = ObservableId::of(ObservableId::Tag::R1);
inline const ObservableId R2 = ObservableId::of(ObservableId::Tag::R2);
}  // namespace obs

/// Whether `o` is defined under model `m` (R1, R2 need a potential).
bool isDefined(const ObservableId& o, const ModelSpec& m);
/// Integrals of motion of the model: H, K, X1, X2 for Free; H, R1, R2 (and K
/// for P1, P3) otherwise.
std::vector<ObservableId> conservedObservables(const ModelSpec& m);

namespace detail {
inline double valueOf(double x) { return x; }
template <typename T, int N>
double valueOf(const Jet<T, N>& x) { return std::real(x.value()); }
}  // namespace detail

/// Throws DomainError when the point is off the manifold or on a singular
/// locus of the model's potential.
template <typename Scalar>
void checkDomain(const PhasePoint<Scalar>& p, const ModelSpec& m) {
  const double u = detail::valueOf(p.u), v = detail::valueOf(p.v);
  if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(detail::valueOf(p.pu)) ||
      !std::isfinite(detail::valueOf(p.pv)))
    throw DomainError("non-finite phase point");
  if (!(u > 0.0)) throw DomainError("u must be positive");
  if (m.potential == Potential::P1 && m.params.at(2) != 0.0 && v == 0.0)
    throw DomainError("v = 0 is singular for P1 with b3 != 0");
}

template <typename Scalar>
Scalar kineticEnergy(const PhasePoint<Scalar>& p) {
  return (p.pu * p.pu + p.pv * p.pv) / (4.0 * p.u);
}

template <typename Scalar>
Scalar potentialEnergy(const PhasePoint<Scalar>& p, const ModelSpec& m) {
  const Scalar& u = p.u;
  const Scalar& v = p.v;
  switch (m.potential) {
    case Potential::Free:
      return Scalar(u * 0.0);
    case Potential::P1: {
      const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
      Scalar r = b1 * (4.0 * u * u + v * v) / (4.0 * u) + b2 / u;
      if (b3 != 0.0) r += b3 / (u * v * v);
      return r;
    }
    case Potential::P2: {
      const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
      return a1 / u + a2 * v / u + a3 * (u * u + v * v) / u;
    }
    case Potential::P3:
      return m.params[0] / u;
  }
  return Scalar(u * 0.0);
}

template <typename Scalar>
Scalar freeX1(const PhasePoint<Scalar>& p) {
  return p.pu * p.pv - p.v / (2.0 * p.u) * (p.pu * p.pu + p.pv * p.pv);
}

template <typename Scalar>
Scalar freeX2(const PhasePoint<Scalar>& p) {
  return p.pv * (p.v * p.pu - p.u * p.pv) - p.v * p.v / (4.0 * p.u) * (p.pu * p.pu + p.pv * p.pv);
}

/// Closed-form value of an observable. The caller is responsible for the
/// domain check (eval_observable does it).
template <typename Scalar>
Scalar observableValue(const ObservableId& o, const PhasePoint<Scalar>& p, const ModelSpec& m) {
  using Tag = ObservableId::Tag;
  const Scalar& u = p.u;
  const Scalar& v = p.v;
  switch (o.tag) {
    case Tag::H:
      return kineticEnergy(p) + potentialEnergy(p, m);
    case Tag::V:
      return potentialEnergy(p, m);
    case Tag::K:
      return p.pv;
    case Tag::X1:
      return freeX1(p);
    case Tag::X2:
      return freeX2(p);
    case Tag::LinearCombo:
      return o.a * freeX1(p) + o.b * freeX2(p) + o.c * (p.pv * p.pv);
    case Tag::R1:
      switch (m.potential) {
        case Potential::P1: {
          const double b1 = m.params[0], b2 = m.params[1], b3 = m.params[2];
          Scalar r = freeX2(p) - b1 * v * v * v * v / (4.0 * u) - b2 * v * v / u;
          if (b3 != 0.0) r -= b3 * (4.0 * u * u + v * v) / (v * v * u);
          return r;
        }
        case Potential::P2: {
          const double a1 = m.params[0], a2 = m.params[1], a3 = m.params[2];
          return freeX1(p) - 2.0 * a1 * v / u + 2.0 * a2 * (u * u - v * v) / u +
                 2.0 * a3 * v * (u * u - v * v) / u;
        }
        case Potential::P3:
          return freeX1(p) - 2.0 * m.params[0] * v / u;
        case Potential::Free:
          break;
      }
      break;
    case Tag::R2:
      switch (m.potential) {
        case Potential::P1: {
          const double b1 = m.params[0], b3 = m.params[2];
          Scalar r = p.pv * p.pv + b1 * v * v;
          if (b3 != 0.0) r += 4.0 * b3 / (v * v);
          return r;
        }
        case Potential::P2: {
          const double a2 = m.params[1], a3 = m.params[2];
          return p.pv * p.pv + 4.0 * a2 * v + 4.0 * a3 * v * v;
        }
        case Potential::P3:
          return freeX2(p) - m.params[0] * v * v / u;
        case Potential::Free:
          break;
      }
      break;
  }
  throw InvalidObservable(o.name() + " is not defined for model " + m.name());
}

/// Value of an observable with validation of the model and the point.
double evalObservable(const ObservableId& o, const PhasePointd& p, const ModelSpec& m);
/// (p_u^2 + p_v^2)/(4u) + V(u, v).
double evalHamiltonian(const PhasePointd& p, const ModelSpec& m);
/// Closed-form phase-space gradient (d_u, d_v, d_pu, d_pv).
Gradient4 gradObservable(const ObservableId& o, const PhasePointd& p, const ModelSpec& m);

}  // namespace darboux
