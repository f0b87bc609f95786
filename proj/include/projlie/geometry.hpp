#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "projlie/errors.hpp"
#include "projlie/jet.hpp"

namespace projlie {

// Symmetric 2x2 matrix of jets: a metric (E, F, G) or a weighted tensor.
struct SymJet {
  JetD m11, m12, m22;

  const JetD& operator()(int i, int j) const {
    if (i == 0 && j == 0) return m11;
    if (i == 1 && j == 1) return m22;
    return m12;
  }
  int degree() const { return std::min({m11.degree(), m12.degree(), m22.degree()}); }
  SymJet truncated(int d) const { return {m11.truncated(d), m12.truncated(d), m22.truncated(d)}; }
  JetD det() const { return m11 * m22 - m12 * m12; }
  Eigen::Matrix2d value() const {
    Eigen::Matrix2d m;
    m << m11.value(), m12.value(), m12.value(), m22.value();
    return m;
  }
  SymJet operator*(double s) const { return {m11 * s, m12 * s, m22 * s}; }
  SymJet operator+(const SymJet& o) const { return {m11 + o.m11, m12 + o.m12, m22 + o.m22}; }
  SymJet operator-(const SymJet& o) const { return {m11 - o.m11, m12 - o.m12, m22 - o.m22}; }
  SymJet scaled(const JetD& s) const { return {m11 * s, m12 * s, m22 * s}; }
  SymJet divided(const JetD& s) const { return {m11 / s, m12 / s, m22 / s}; }
};

enum class Signature { riemannian, lorentzian, negative };

inline std::string to_string(Signature s) {
  switch (s) {
    case Signature::riemannian: return "riemannian";
    case Signature::lorentzian: return "lorentzian";
    case Signature::negative: return "negative";
  }
  return "?";
}

// Validity region: a sampling box plus a predicate. `violation` returns an
// empty string for admissible points and a description otherwise.
struct Domain {
  double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
  std::function<std::string(Point)> violation;

  std::string why_not(Point p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return "non-finite point";
    return violation ? violation(p) : std::string{};
  }
  bool contains(Point p) const { return why_not(p).empty(); }
};

class MetricField {
 public:
  using Evaluator = std::function<SymJet(const JetD& x, const JetD& y)>;

  MetricField() = default;
  MetricField(std::string name, Evaluator f, Signature sig, Domain dom)
      : name_(std::move(name)), f_(std::move(f)), sig_(sig), dom_(std::move(dom)) {}

  const std::string& name() const { return name_; }
  Signature signature() const { return sig_; }
  const Domain& domain() const { return dom_; }

  SymJet jets(const JetD& x, const JetD& y) const { return f_(x, y); }
  SymJet jets(Point p, int degree) const {
    return f_(JetD::variable_x(p, degree), JetD::variable_y(p, degree));
  }
  Eigen::Matrix2d matrix(Point p) const { return jets(p, 0).value(); }

 private:
  std::string name_;
  Evaluator f_;
  Signature sig_ = Signature::riemannian;
  Domain dom_;
};

class VectorField {
 public:
  using Evaluator = std::function<std::array<JetD, 2>(const JetD& x, const JetD& y)>;

  VectorField() = default;
  explicit VectorField(Evaluator f) : f_(std::move(f)) {}

  std::array<JetD, 2> jets(const JetD& x, const JetD& y) const { return f_(x, y); }
  std::array<JetD, 2> jets(Point p, int degree) const {
    return f_(JetD::variable_x(p, degree), JetD::variable_y(p, degree));
  }
  Eigen::Vector2d value(Point p) const {
    auto v = jets(p, 0);
    return {v[0].value(), v[1].value()};
  }
  VectorField scaled(double s) const {
    auto f = f_;
    return VectorField([f, s](const JetD& x, const JetD& y) {
      auto v = f(x, y);
      return std::array<JetD, 2>{v[0] * s, v[1] * s};
    });
  }

 private:
  Evaluator f_;
};

// Fails when the metric is degenerate at the expansion point.
inline void require_nondegenerate(const SymJet& g, const char* who) {
  const double d = g.m11.value() * g.m22.value() - g.m12.value() * g.m12.value();
  const double scale = std::max({std::abs(g.m11.value()), std::abs(g.m12.value()), std::abs(g.m22.value())});
  if (!(std::abs(d) > 1e-12 * scale * scale) || !std::isfinite(d))
    throw DegenerateMetric(std::string(who) + ": metric is degenerate at the expansion point");
}

inline SymJet inverse(const SymJet& g) {
  require_nondegenerate(g, "inverse");
  const JetD d = g.det();
  return {g.m22 / d, -g.m12 / d, g.m11 / d};
}

// Coordinate change old = A * new + b, applied to metrics and vector fields.
struct AffineMap {
  Eigen::Matrix2d A = Eigen::Matrix2d::Identity();
  Eigen::Vector2d b = Eigen::Vector2d::Zero();

  std::pair<JetD, JetD> old_coords(const JetD& u, const JetD& w) const {
    return {u * A(0, 0) + w * A(0, 1) + b(0), u * A(1, 0) + w * A(1, 1) + b(1)};
  }
  Point to_old(Point p) const {
    Eigen::Vector2d q = A * Eigen::Vector2d(p.x, p.y) + b;
    return {q(0), q(1)};
  }
  Point to_new(Point p) const {
    Eigen::Vector2d q = A.inverse() * (Eigen::Vector2d(p.x, p.y) - b);
    return {q(0), q(1)};
  }
};

// g_new = A^T g_old(A u + b) A.
inline SymJet pullback(const SymJet& g, const Eigen::Matrix2d& A) {
  auto entry = [&](int i, int j) {
    JetD r = g(0, 0) * (A(0, i) * A(0, j));
    r += g(0, 1) * (A(0, i) * A(1, j) + A(1, i) * A(0, j));
    r += g(1, 1) * (A(1, i) * A(1, j));
    return r;
  };
  return {entry(0, 0), entry(0, 1), entry(1, 1)};
}

inline Domain transport(const Domain& d, const AffineMap& map) {
  Domain r;
  double xs[4], ys[4];
  const Point corners[4] = {{d.x_min, d.y_min}, {d.x_min, d.y_max}, {d.x_max, d.y_min}, {d.x_max, d.y_max}};
  for (int k = 0; k < 4; ++k) {
    Point q = map.to_new(corners[k]);
    xs[k] = q.x;
    ys[k] = q.y;
  }
  r.x_min = *std::min_element(xs, xs + 4);
  r.x_max = *std::max_element(xs, xs + 4);
  r.y_min = *std::min_element(ys, ys + 4);
  r.y_max = *std::max_element(ys, ys + 4);
  r.violation = [d, map](Point p) {
    const Point q = map.to_old(p);
    if (q.x < d.x_min || q.x > d.x_max || q.y < d.y_min || q.y > d.y_max) return std::string("outside box");
    return d.why_not(q);
  };
  return r;
}

inline MetricField transport(const MetricField& g, const AffineMap& map, std::string name = {}) {
  auto f = [g, map](const JetD& u, const JetD& w) {
    auto [x, y] = map.old_coords(u, w);
    return pullback(g.jets(x, y), map.A);
  };
  return MetricField(name.empty() ? g.name() + "~" : std::move(name), f, g.signature(),
                     transport(g.domain(), map));
}

inline VectorField transport(const VectorField& v, const AffineMap& map) {
  const Eigen::Matrix2d Ai = map.A.inverse();
  return VectorField([v, map, Ai](const JetD& u, const JetD& w) {
    auto [x, y] = map.old_coords(u, w);
    auto o = v.jets(x, y);
    return std::array<JetD, 2>{o[0] * Ai(0, 0) + o[1] * Ai(0, 1), o[0] * Ai(1, 0) + o[1] * Ai(1, 1)};
  });
}

// Gamma[i][j][k] = Gamma^i_{jk}.
struct Christoffel {
  JetD G[2][2][2];
  int degree() const { return G[0][0][0].degree(); }
};

inline Christoffel christoffel(const SymJet& g) {
  if (g.degree() < 1) throw DegreeMismatch("christoffel needs metric jets of degree >= 1");
  const int d = g.degree() - 1;
  const SymJet gi = inverse(g).truncated(d);
  // dg[k](i, j) = d_k g_ij
  const SymJet dg[2] = {{g.m11.dx(), g.m12.dx(), g.m22.dx()}, {g.m11.dy(), g.m12.dy(), g.m22.dy()}};
  Christoffel c;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = j; k < 2; ++k) {
        JetD s(g.m11.center(), d);
        for (int m = 0; m < 2; ++m) s += gi(i, m) * (dg[j](m, k) + dg[k](m, j) - dg[m](j, k));
        c.G[i][j][k] = s * 0.5;
        c.G[i][k][j] = c.G[i][j][k];
      }
  return c;
}

inline Christoffel christoffel(const MetricField& g, Point p, int degree = kDefaultDegree) {
  return christoffel(g.jets(p, degree));
}

// Coefficients of y'' = K0 + K1 y' + K2 y'^2 + K3 y'^3.
struct ProjectiveConnection {
  std::array<JetD, 4> K;
  std::array<double, 4> values() const { return {K[0].value(), K[1].value(), K[2].value(), K[3].value()}; }
};

inline ProjectiveConnection projective_connection(const Christoffel& c) {
  return {{-c.G[1][0][0], c.G[0][0][0] - c.G[1][0][1] * 2.0, -(c.G[1][1][1] - c.G[0][0][1] * 2.0), c.G[0][1][1]}};
}

inline ProjectiveConnection projective_connection(const MetricField& g, Point p, int degree = kDefaultDegree) {
  return projective_connection(christoffel(g, p, degree));
}

// (L_v g)_ij = v^k d_k g_ij + g_kj d_i v^k + g_ik d_j v^k, one degree lower.
inline SymJet lie_derivative(const SymJet& g, const std::array<JetD, 2>& v) {
  const int d = std::min(g.degree(), std::min(v[0].degree(), v[1].degree())) - 1;
  if (d < 0) throw DegreeMismatch("lie derivative needs jets of degree >= 1");
  const SymJet gt = g.truncated(d);
  const JetD vt[2] = {v[0].truncated(d), v[1].truncated(d)};
  const SymJet gd = g.truncated(d + 1);
  const JetD dg[2][3] = {{gd.m11.dx(), gd.m12.dx(), gd.m22.dx()}, {gd.m11.dy(), gd.m12.dy(), gd.m22.dy()}};
  // dv[i][k] = d_i v^k
  const JetD v0 = v[0].truncated(d + 1), v1 = v[1].truncated(d + 1);
  const JetD dv[2][2] = {{v0.dx(), v1.dx()}, {v0.dy(), v1.dy()}};
  auto entry = [&](int i, int j, int slot) {
    JetD r = vt[0] * dg[0][slot] + vt[1] * dg[1][slot];
    for (int k = 0; k < 2; ++k) r += gt(k, j) * dv[i][k] + gt(i, k) * dv[j][k];
    return r;
  };
  return {entry(0, 0, 0), entry(0, 1, 1), entry(1, 1, 2)};
}

inline SymJet lie_derivative_metric(const MetricField& g, const VectorField& v, Point p, int degree = 2) {
  return lie_derivative(g.jets(p, degree), v.jets(p, degree));
}

// R is twice the Gaussian curvature, so the unit sphere has R = +2.
struct CurvatureInvariants {
  double R = 0, L = 0, Delta = 0;
  Eigen::Vector2d dR = Eigen::Vector2d::Zero(), dL = Eigen::Vector2d::Zero(), dDelta = Eigen::Vector2d::Zero();
};

inline JetD scalar_curvature(const SymJet& g) {
  const Christoffel c = christoffel(g);
  const int d = c.degree() - 1;
  if (d < 0) throw DegreeMismatch("scalar curvature needs metric jets of degree >= 2");
  JetD Gt[2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) Gt[i][j][k] = c.G[i][j][k].truncated(d);
  // R^a_{101} = d_0 G^a_{11} - d_1 G^a_{01} + G^a_{0e} G^e_{11} - G^a_{1e} G^e_{01}
  JetD Ra[2];
  for (int a = 0; a < 2; ++a) {
    Ra[a] = c.G[a][1][1].dx() - c.G[a][0][1].dy();
    for (int e = 0; e < 2; ++e) Ra[a] += Gt[a][0][e] * Gt[e][1][1] - Gt[a][1][e] * Gt[e][0][1];
  }
  const SymJet gt = g.truncated(d);
  const JetD R1212 = gt.m11 * Ra[0] + gt.m12 * Ra[1];
  return R1212 / gt.det() * 2.0;
}

inline CurvatureInvariants curvature_invariants(const SymJet& g) {
  if (g.degree() < 5) throw DegreeMismatch("curvature invariants need metric jets of degree >= 5");
  const JetD R = scalar_curvature(g);                  // degree D-2
  const int dR = R.degree() - 1;                       // degree of dR
  const JetD Rx = R.dx(), Ry = R.dy();
  const SymJet gi = inverse(g).truncated(dR);
  const JetD L = gi.m11 * Rx * Rx + gi.m12 * Rx * Ry * 2.0 + gi.m22 * Ry * Ry;
  const JetD s = sqrt(abs_pow(g.det(), 1.0)).truncated(dR);  // sqrt|det g|
  const JetD fx = s * (gi.m11 * Rx + gi.m12 * Ry);
  const JetD fy = s * (gi.m12 * Rx + gi.m22 * Ry);
  const JetD Delta = (fx.dx() + fy.dy()) / s.truncated(dR - 1);
  CurvatureInvariants out;
  out.R = R.value();
  out.L = L.value();
  out.Delta = Delta.value();
  out.dR = {Rx.value(), Ry.value()};
  out.dL = {L.coeff(1, 0), L.coeff(0, 1)};
  out.dDelta = {Delta.coeff(1, 0), Delta.coeff(0, 1)};
  return out;
}

inline CurvatureInvariants curvature_invariants(const MetricField& g, Point p, int degree = kDefaultDegree) {
  return curvature_invariants(g.jets(p, degree));
}

}  // namespace projlie
