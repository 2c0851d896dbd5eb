#pragma once

// Embeddings of D1 as a surface of revolution in E3 and as a surface in
// pseudo-Euclidean space with signature (+, +, -), plus mesh export.

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "darboux/errors.hpp"

namespace darboux {

enum class Signature { Euclidean, Lorentzian };
std::string signatureName(Signature s);

/// (X, Y, Z) for Euclidean, (X, Y, T) for Lorentzian.
struct EmbeddedPoint {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  Signature signature = Signature::Euclidean;
};

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
template <typename F>
double integrateGK(F&& f, double a, double b, double tolerance, int depth = 40);

/// Profile height Z(u) = int_{1/2}^u sqrt(2t - 1/(2t)) dt, u >= 1/2.
double embeddingZ(double u);
/// Z(u1) - Z(u0) integrated directly, so finite differences stay smooth.
double embeddingZIncrement(double u0, double u1);
/// Elliptic form (sqrt 2 / 3)(sqrt(4u^3 - u) - F(beta, 1/sqrt 2)) with
/// sin(beta) = sqrt(1 - 1/(2u)).
double embeddingZClosedForm(double u);

EmbeddedPoint embedEuclidean(double u, double v);
/// X = sqrt(2u) v, Y = sqrt(u)(4u^2/5 - v^2 + 1/2), T = sqrt(u)(4u^2/5 - v^2 - 1/2).
EmbeddedPoint embedPseudo(double u, double v);
EmbeddedPoint embed(Signature s, double u, double v);
/// Smallest u of the embedding's domain.
double embeddingDomainStart(Signature s);

struct MetricResidual {
  double guu = 0.0;  // g_uu - 2u
  double gvv = 0.0;  // g_vv - 2u
  double guv = 0.0;  // g_uv
  double max() const;
};

/// First fundamental form by central differences of step h (one-sided at
/// the domain edge), compared with 2u(du^2 + dv^2).
MetricResidual inducedMetricResidualComponents(Signature s, double u, double v, double h);
double inducedMetricResidual(Signature s, double u, double v, double h);

struct GridResidual {
  double maxResidual = 0.0;
  double worstU = 0.0;
  double worstV = 0.0;
  std::size_t points = 0;
};
/// Maximum residual over an nu x nv grid covering [u0, u1] x [v0, v1].
GridResidual metricResidualGrid(Signature s, double u0, double u1, double v0, double v1, int nu, int nv, double h);

/// Z tabulated on a uniform grid in s = sqrt(u - 1/2), read back with
/// monotone cubic (Fritsch-Carlson) interpolation.
class ZTable {
 public:
  ZTable(double uMax, int nodes);
  double operator()(double u) const;
  double uMax() const { return uMax_; }

 private:
  double uMax_;
  double ds_;
  std::vector<double> z_;
  std::vector<double> slope_;
};

struct Mesh {
  Signature signature = Signature::Euclidean;
  int nu = 0;
  int nv = 0;
  std::vector<double> u, v;                 // parameter grid, row-major (u outer)
  std::vector<Eigen::Vector3d> vertices;    // same ordering
  std::vector<std::array<int, 4>> quads;    // zero-based vertex indices
};

Mesh buildMesh(Signature s, double u0, double u1, double v0, double v1, int nu, int nv);
/// `v x y z` lines then 1-based `f a b c d` quads.
void writeObj(const Mesh& m, std::ostream& os);
/// Header `u,v,X,Y,Z` (or `u,v,X,Y,T`), one row per vertex.
void writeCsv(const Mesh& m, std::ostream& os);
void writeMeshFile(const Mesh& m, const std::string& path, const std::string& format);

// ---- implementation of the quadrature template ----

namespace detail {
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780, 0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <typename F>
void gk15(F& f, double a, double b, double& kronrod, double& gauss) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const double fc = f(c);
  kronrod = kKronrodWeights[7] * fc;
  gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = r * kKronrodNodes[i];
    const double s = f(c - x) + f(c + x);
    kronrod += kKronrodWeights[i] * s;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
  }
  kronrod *= r;
  gauss *= r;
}

template <typename F>
double adaptGK(F& f, double a, double b, double tolerance, int depth) {
  double k = 0.0, g = 0.0;
  gk15(f, a, b, k, g);
  if (std::abs(k - g) <= tolerance || depth <= 0) return k;
  const double m = 0.5 * (a + b);
  return adaptGK(f, a, m, 0.5 * tolerance, depth - 1) + adaptGK(f, m, b, 0.5 * tolerance, depth - 1);
}
}  // namespace detail

template <typename F>
double integrateGK(F&& f, double a, double b, double tolerance, int depth) {
  return detail::adaptGK(f, a, b, tolerance, depth);
}

}  // namespace darboux
