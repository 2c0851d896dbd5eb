#include "darboux/embeddings.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "darboux/specfun.hpp"

namespace darboux {

namespace {

// dZ/ds with u = 1/2 + s^2.
double profileSlope(double s) {
  const double t = 0.5 + s * s;
  return 2.0 * std::sqrt(2.0) * s * s * std::sqrt((2.0 * t + 1.0) / (2.0 * t));
}

double profileIntegral(double s0, double s1) {
  const double scale = std::abs(s1 - s0) * profileSlope(std::max(std::abs(s0), std::abs(s1)));
  return integrateGK(profileSlope, s0, s1, 1e-15 * scale + 1e-300);
}

void requireFinite(double u, double v) {
  if (!std::isfinite(u) || !std::isfinite(v)) throw DomainError("non-finite embedding parameter");
}

double inner(Signature s, const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return s == Signature::Euclidean ? a.dot(b) : a[0] * b[0] + a[1] * b[1] - a[2] * b[2];
}

// Embedding components with the Z (or T) slot measured from its value at u0.
Eigen::Vector3d relativePoint(Signature s, double u0, double u, double v) {
  if (s == Signature::Lorentzian) return embedPseudo(u, v).x;
  const double r = std::sqrt(2.0 * u);
  return {r * std::cos(v), r * std::sin(v), embeddingZIncrement(u0, u)};
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string signatureName(Signature s) { return s == Signature::Euclidean ? "euclidean" : "lorentzian"; }

double embeddingZ(double u) {
  if (!std::isfinite(u) || u < 0.5) throw DomainError("the Euclidean embedding needs u >= 1/2");
  return profileIntegral(0.0, std::sqrt(u - 0.5));
}

double embeddingZIncrement(double u0, double u1) {
  if (!std::isfinite(u0) || !std::isfinite(u1) || u0 < 0.5 || u1 < 0.5)
    throw DomainError("the Euclidean embedding needs u >= 1/2");
  return profileIntegral(std::sqrt(u0 - 0.5), std::sqrt(u1 - 0.5));
}

double embeddingZClosedForm(double u) {
  if (!std::isfinite(u) || u < 0.5) throw DomainError("the Euclidean embedding needs u >= 1/2");
  const double beta = std::asin(std::sqrt(1.0 - 1.0 / (2.0 * u)));
  return std::sqrt(2.0) / 3.0 * (std::sqrt(4.0 * u * u * u - u) - ellipticF(beta, 1.0 / std::sqrt(2.0)).value);
}

EmbeddedPoint embedEuclidean(double u, double v) {
  requireFinite(u, v);
  if (u < 0.5) throw DomainError("the Euclidean embedding needs u >= 1/2");
  const double r = std::sqrt(2.0 * u);
  return {{r * std::cos(v), r * std::sin(v), embeddingZ(u)}, Signature::Euclidean};
}

EmbeddedPoint embedPseudo(double u, double v) {
  requireFinite(u, v);
  if (u < 0.0) throw DomainError("the pseudo-Euclidean embedding needs u >= 0");
  const double su = std::sqrt(u), w = 0.8 * u * u - v * v;
  return {{std::sqrt(2.0 * u) * v, su * (w + 0.5), su * (w - 0.5)}, Signature::Lorentzian};
}

EmbeddedPoint embed(Signature s, double u, double v) {
  return s == Signature::Euclidean ? embedEuclidean(u, v) : embedPseudo(u, v);
}

double embeddingDomainStart(Signature s) { return s == Signature::Euclidean ? 0.5 : 0.0; }

double MetricResidual::max() const { return std::max({std::abs(guu), std::abs(gvv), std::abs(guv)}); }

MetricResidual inducedMetricResidualComponents(Signature s, double u, double v, double h) {
  requireFinite(u, v);
  if (!(h > 0.0)) throw DomainError("stencil step must be positive");
  const double start = embeddingDomainStart(s);
  if (u < start) throw DomainError("stencil outside the embedding domain");
  const auto P = [&](double uu, double vv) { return relativePoint(s, u, uu, vv); };
  Eigen::Vector3d xu;
  if (u - h >= start) {
    xu = (P(u + h, v) - P(u - h, v)) / (2.0 * h);
  } else {
    xu = (-3.0 * P(u, v) + 4.0 * P(u + h, v) - P(u + 2.0 * h, v)) / (2.0 * h);
  }
  const Eigen::Vector3d xv = (P(u, v + h) - P(u, v - h)) / (2.0 * h);
  return {inner(s, xu, xu) - 2.0 * u, inner(s, xv, xv) - 2.0 * u, inner(s, xu, xv)};
}

double inducedMetricResidual(Signature s, double u, double v, double h) {
  return inducedMetricResidualComponents(s, u, v, h).max();
}

GridResidual metricResidualGrid(Signature s, double u0, double u1, double v0, double v1, int nu, int nv, double h) {
  if (nu < 2 || nv < 2) throw DomainError("grid needs at least 2 x 2 points");
  GridResidual out;
  for (int i = 0; i < nu; ++i) {
    const double u = u0 + (u1 - u0) * i / (nu - 1);
    for (int j = 0; j < nv; ++j) {
      const double v = v0 + (v1 - v0) * j / (nv - 1);
      const double r = inducedMetricResidual(s, u, v, h);
      ++out.points;
      if (r > out.maxResidual || out.points == 1) {
        out.maxResidual = r;
        out.worstU = u;
        out.worstV = v;
      }
    }
  }
  return out;
}

ZTable::ZTable(double uMax, int nodes) : uMax_(uMax) {
  if (!(uMax > 0.5) || nodes < 2) throw DomainError("Z table needs uMax > 1/2 and at least 2 nodes");
  const double sMax = std::sqrt(uMax - 0.5);
  ds_ = sMax / (nodes - 1);
  z_.assign(nodes, 0.0);
  for (int i = 1; i < nodes; ++i) z_[i] = z_[i - 1] + profileIntegral((i - 1) * ds_, i * ds_);
  std::vector<double> secant(nodes - 1);
  for (int i = 0; i + 1 < nodes; ++i) secant[i] = (z_[i + 1] - z_[i]) / ds_;
  slope_.assign(nodes, 0.0);
  slope_[0] = secant[0];
  slope_[nodes - 1] = secant[nodes - 2];
  for (int i = 1; i + 1 < nodes; ++i)
    slope_[i] = secant[i - 1] * secant[i] <= 0.0 ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
  for (int i = 0; i + 1 < nodes; ++i) {
    if (secant[i] == 0.0) {
      slope_[i] = slope_[i + 1] = 0.0;
      continue;
    }
    const double a = slope_[i] / secant[i], b = slope_[i + 1] / secant[i], r2 = a * a + b * b;
    if (r2 > 9.0) {
      const double t = 3.0 / std::sqrt(r2);
      slope_[i] = t * a * secant[i];
      slope_[i + 1] = t * b * secant[i];
    }
  }
}

double ZTable::operator()(double u) const {
  if (!std::isfinite(u) || u < 0.5 || u > uMax_ * (1.0 + 1e-12)) throw DomainError("u outside the Z table");
  const double s = std::sqrt(std::max(0.0, u - 0.5));
  const int last = static_cast<int>(z_.size()) - 1;
  const int i = std::min(last - 1, static_cast<int>(s / ds_));
  const double t = (s - i * ds_) / ds_, t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * z_[i] + (t3 - 2 * t2 + t) * ds_ * slope_[i] + (-2 * t3 + 3 * t2) * z_[i + 1] +
         (t3 - t2) * ds_ * slope_[i + 1];
}

Mesh buildMesh(Signature s, double u0, double u1, double v0, double v1, int nu, int nv) {
  if (nu < 2 || nv < 2) throw DomainError("mesh needs at least 2 x 2 points");
  if (!(u1 > u0) || !(v1 > v0)) throw DomainError("empty mesh range");
  if (u0 < embeddingDomainStart(s)) throw DomainError("mesh range outside the embedding domain");
  Mesh m;
  m.signature = s;
  m.nu = nu;
  m.nv = nv;
  std::vector<double> ring(nu);
  for (int i = 0; i < nu; ++i) ring[i] = u0 + (u1 - u0) * i / (nu - 1);
  std::vector<double> zRing(nu, 0.0);
  if (s == Signature::Euclidean && u1 > 0.5) {
    const ZTable table(u1, std::max(257, 8 * nu));
    for (int i = 0; i < nu; ++i) zRing[i] = table(ring[i]);
  }
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const double u = ring[i], v = v0 + (v1 - v0) * j / (nv - 1);
      m.u.push_back(u);
      m.v.push_back(v);
      if (s == Signature::Euclidean) {
        const double r = std::sqrt(2.0 * u);
        m.vertices.emplace_back(r * std::cos(v), r * std::sin(v), zRing[i]);
      } else {
        m.vertices.push_back(embedPseudo(u, v).x);
      }
    }
  }
  for (int i = 0; i + 1 < nu; ++i)
    for (int j = 0; j + 1 < nv; ++j) {
      const int a = i * nv + j;
      m.quads.push_back({a, a + nv, a + nv + 1, a + 1});
    }
  return m;
}

void writeObj(const Mesh& m, std::ostream& os) {
  if (m.signature == Signature::Euclidean)
    os << "# darboux embedding, signature euclidean, columns X Y Z\n";
  else
    os << "# darboux embedding, signature lorentzian (+,+,-), columns X Y T\n";
  os << "# grid " << m.nu << " x " << m.nv << "\n";
  for (const auto& x : m.vertices) os << "v " << fmt(x[0]) << ' ' << fmt(x[1]) << ' ' << fmt(x[2]) << '\n';
  for (const auto& q : m.quads) os << "f " << q[0] + 1 << ' ' << q[1] + 1 << ' ' << q[2] + 1 << ' ' << q[3] + 1 << '\n';
}

void writeCsv(const Mesh& m, std::ostream& os) {
  os << (m.signature == Signature::Euclidean ? "u,v,X,Y,Z\n" : "u,v,X,Y,T\n");
  for (std::size_t k = 0; k < m.vertices.size(); ++k) {
    const auto& x = m.vertices[k];
    os << fmt(m.u[k]) << ',' << fmt(m.v[k]) << ',' << fmt(x[0]) << ',' << fmt(x[1]) << ',' << fmt(x[2]) << '\n';
  }
}

void writeMeshFile(const Mesh& m, const std::string& path, const std::string& format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  if (format == "obj")
    writeObj(m, out);
  else if (format == "csv")
    writeCsv(m, out);
  else
    throw UsageError("unknown mesh format " + format);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace darboux
