#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "projlie/catalog.hpp"
#include "projlie/dynamics.hpp"
#include "projlie/errors.hpp"
#include "projlie/geometry.hpp"
#include "projlie/jet.hpp"
#include "projlie/metrizability.hpp"

namespace projlie {

// ---------------------------------------------------------------------------
// Pair classification through G = g^{-1} gbar.

enum class PairKind { liouville, complex_liouville, jordan_block, proportional, indeterminate };

inline std::string to_string(PairKind k) {
  switch (k) {
    case PairKind::liouville: return "liouville";
    case PairKind::complex_liouville: return "complex_liouville";
    case PairKind::jordan_block: return "jordan_block";
    case PairKind::proportional: return "proportional";
    case PairKind::indeterminate: return "indeterminate";
  }
  return "?";
}

struct ClassifyOptions {
  double disc_margin = 1e-8;       // on disc(G) / |G|^2
  double nilpotent_margin = 1e-8;  // on |G - lambda I| / |G|
  double guard = 10;               // a decision needs margin > guard * threshold
};

struct PairClass {
  PairKind kind = PairKind::indeterminate;
  std::array<std::complex<double>, 2> eigenvalues{};
  double margin = 0;     // the quantity the decision was based on
  double threshold = 0;  // what it was compared against
  Eigen::Matrix2d G = Eigen::Matrix2d::Zero();
};

inline PairClass classify_pair(const Eigen::Matrix2d& g, const Eigen::Matrix2d& gbar, const ClassifyOptions& opt = {}) {
  auto check = [](const Eigen::Matrix2d& m, const char* who) {
    const double s = m.cwiseAbs().maxCoeff();
    if (!(std::abs(m.determinant()) > 1e-12 * s * s))
      throw DegenerateMetric(std::string(who) + " is degenerate at the classification point");
  };
  check(g, "g");
  check(gbar, "gbar");
  PairClass r;
  r.G = g.inverse() * gbar;
  const double T = r.G.trace(), D = r.G.determinant(), n2 = r.G.squaredNorm();
  const double disc = T * T - 4 * D;
  const double rel = disc / n2;
  if (rel > opt.guard * opt.disc_margin) {
    const double s = std::sqrt(disc);
    r.kind = PairKind::liouville;
    r.eigenvalues = {std::complex<double>((T - s) / 2), std::complex<double>((T + s) / 2)};
    r.margin = rel;
    r.threshold = opt.disc_margin;
  } else if (rel < -opt.guard * opt.disc_margin) {
    const double s = std::sqrt(-disc);
    r.kind = PairKind::complex_liouville;
    r.eigenvalues = {std::complex<double>(T / 2, -s / 2), std::complex<double>(T / 2, s / 2)};
    r.margin = -rel;
    r.threshold = opt.disc_margin;
  } else if (std::abs(rel) <= opt.disc_margin) {
    const double lam = T / 2;
    r.eigenvalues = {std::complex<double>(lam), std::complex<double>(lam)};
    const double nil = (r.G - lam * Eigen::Matrix2d::Identity()).norm() / std::sqrt(n2);
    r.margin = nil;
    r.threshold = opt.nilpotent_margin;
    if (nil > opt.guard * opt.nilpotent_margin) r.kind = PairKind::jordan_block;
    else if (nil <= opt.nilpotent_margin) r.kind = PairKind::proportional;
  } else {
    r.margin = std::abs(rel);
    r.threshold = opt.disc_margin;
  }
  return r;
}

inline PairClass classify_pair(const MetricField& g, const MetricField& gbar, Point p, const ClassifyOptions& opt = {}) {
  return classify_pair(g.matrix(p), gbar.matrix(p), opt);
}

// ---------------------------------------------------------------------------
// Killing obstruction: with a Killing field R, L and Delta are functions of one
// variable, so dR, dL and dDelta are pairwise proportional.

struct KillingObstruction {
  double det1 = 0;  // det[dR; dL], differentials normalized to unit length
  double det2 = 0;  // det[dR; dDelta]
  CurvatureInvariants invariants;
};

inline KillingObstruction killing_obstruction(const MetricField& g, Point p, int degree = kDefaultDegree) {
  KillingObstruction k;
  k.invariants = curvature_invariants(g, p, degree);
  auto unit = [](const Eigen::Vector2d& v) {
    const double n = v.norm();
    return n > 0 ? Eigen::Vector2d(v / n) : v;
  };
  auto cross = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a(0) * b(1) - a(1) * b(0); };
  const Eigen::Vector2d r = unit(k.invariants.dR);
  k.det1 = cross(r, unit(k.invariants.dL));
  k.det2 = cross(r, unit(k.invariants.dDelta));
  return k;
}

// ---------------------------------------------------------------------------
// Prolongation of the metrizability system for a = e^{mu x} A(y) when the
// projective connection does not depend on x.
//
// The system splits into one algebraic relation r_1 . A = 0 and three ODEs
// A' = S A + t. Differentiating a relation r . A + k = 0 along y and replacing
// A' gives (r' + r S) . A + (k' + r . t) = 0, which yields the next row.

struct ProlongationRows {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();  // m A = b
  double mu = 0;
  double det_m = 0;
  double det_b = 0;  // det of m with its first column replaced by b
  double scale = 0;  // product of the row norms of m (Hadamard bound on |det m|)
};

// det of m with the first column replaced by b.
inline double substituted_det(const Eigen::Matrix3d& m, const Eigen::Vector3d& b) {
  Eigen::Matrix3d t = m;
  t.col(0) = b;
  return t.determinant();
}

namespace detail {

// The row recurrence is carried out in extended precision: the rows grow like
// exp(6y) per step while the determinants stay moderate.
using JetL = Jet<long double>;

inline JetL widen(const JetD& a) {
  JetL r(a.center(), a.degree());
  for (int n = 0; n <= a.degree(); ++n)
    for (int i = 0; i <= n; ++i) r.coeff(i, n - i) = a.coeff(i, n - i);
  return r;
}

inline ProlongationRows prolong(const std::array<JetD, 4>& Kd, long double mu, const std::array<JetD, 3>* td,
                                const JetD* k0d) {
  int d = Kd[0].degree();
  for (const auto& k : Kd) d = std::min(d, k.degree());
  if (td)
    for (const auto& t : *td) d = std::min(d, t.degree());
  if (k0d) d = std::min(d, k0d->degree());
  if (d < 2) throw DegreeMismatch("prolongation needs coefficient jets of degree >= 2");

  std::array<JetL, 4> K;
  for (int i = 0; i < 4; ++i) K[static_cast<std::size_t>(i)] = widen(Kd[static_cast<std::size_t>(i)].truncated(d));
  const JetL zero = K[0] * 0.0L;
  const long double t3 = 2.0L / 3.0L;
  // A' = S A, rows indexed by (a11, a12, a22).
  const JetL S[3][3] = {
      {K[2] * (2 * t3), K[1] * -t3 - 2 * mu, K[0] * -2.0L},
      {K[3], K[2] * (t3 / 2), K[1] * -t3 - mu / 2},
      {zero, K[3] * 2.0L, K[2] * -t3},
  };
  std::array<JetL, 3> t{zero, zero, zero};
  if (td)
    for (int i = 0; i < 3; ++i) t[static_cast<std::size_t>(i)] = widen((*td)[static_cast<std::size_t>(i)].truncated(d));
  JetL k = k0d ? widen(k0d->truncated(d)) : zero;
  std::array<JetL, 3> row{K[1] * -t3 + mu, K[0] * 2.0L, zero};

  Eigen::Matrix<long double, 3, 3> m;
  Eigen::Matrix<long double, 3, 1> b;
  for (int r = 0; r < 3; ++r) {
    for (int j = 0; j < 3; ++j) m(r, j) = row[static_cast<std::size_t>(j)].value();
    b(r) = -k.value();
    if (r == 2) break;
    const int dd = row[0].degree() - 1;
    std::array<JetL, 3> next;
    JetL nk = k.dy();
    for (int j = 0; j < 3; ++j) {
      next[static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(j)].dy();
      for (int i = 0; i < 3; ++i)
        next[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(i)].truncated(dd) * S[i][j].truncated(dd);
    }
    for (int i = 0; i < 3; ++i) nk += row[static_cast<std::size_t>(i)].truncated(dd) * t[static_cast<std::size_t>(i)].truncated(dd);
    row = next;
    k = nk;
  }
  ProlongationRows out;
  out.m = m.cast<double>();
  out.b = b.cast<double>();
  out.mu = static_cast<double>(mu);
  out.det_m = static_cast<double>(m.determinant());
  Eigen::Matrix<long double, 3, 3> mb = m;
  mb.col(0) = b;
  out.det_b = static_cast<double>(mb.determinant());
  out.scale = static_cast<double>(m.row(0).norm() * m.row(1).norm() * m.row(2).norm());
  return out;
}

}  // namespace detail

// Rows of the homogeneous branch. Only the y-derivatives of K are used; K is
// assumed independent of x.
inline ProlongationRows prolongation_rows_homogeneous(const ProjectiveConnection& K, double mu) {
  return detail::prolong(K.K, mu, nullptr, nullptr);
}

// x_old = x + y, y_old = x - y; the field d/dx_old + d/dy_old becomes d/dx.
inline AffineMap adapted_map() {
  AffineMap m;
  m.A << 1, 1, 1, -1;
  return m;
}

// Projective connection of a Liouville or complex-Liouville catalog metric in
// coordinates where v = d/dx. The coefficients do not depend on x, so they are
// taken on the line x = 0.
inline ProjectiveConnection adapted_connection(const CatalogEntry& e, double y, int degree = 4) {
  switch (e.id) {
    case CaseId::T1_1a:
    case CaseId::T1_1b:
    case CaseId::T1_1c:
      return projective_connection(transport(e.g, adapted_map()), {0.0, y}, degree);
    case CaseId::T1_2a:
    case CaseId::T1_2b:
    case CaseId::T1_2c:
      return projective_connection(e.g, {0.0, y}, degree);
    default:
      throw ParamConstraintViolation("adapted connection is defined for the Liouville and complex cases only");
  }
}

// Case 1a in adapted coordinates: the weighted tensor abar of the metric (up to
// the constant 2^{-1/3}) and a partial solution P of dP/dx = P + abar.
inline SymJet bara_1a(double c, const JetD& x, const JetD& y) {
  const double c23 = std::cbrt(c) * std::cbrt(c);
  const JetD den = cbrt(y) * (4 * c23);
  const JetD u = exp(x * -3.0 - y * 3.0) * (y - x) * c, w = exp(x * -3.0 + y * 3.0) * (x + y);
  const JetD e4 = exp(x * 4.0);
  const JetD d = e4 * (u - w) / den, o = e4 * (u + w) / den;
  return {d, o, d};
}

inline SymJet partial_solution_1a(double c, const JetD& x, const JetD& y) {
  const double c23 = std::cbrt(c) * std::cbrt(c);
  const JetD den = cbrt(y) * (8 * c23);
  const JetD ep = exp(y * 3.0), em = exp(y * -3.0), ex = exp(x);
  const JetD d = x * (y * ep * -2.0 - x * em * c + y * em * (2 * c) - x * ep) * ex / den;
  const JetD o = x * (y * ep * 2.0 - x * em * c + y * em * (2 * c) + x * ep) * ex / den;
  return {d, o, d};
}

// Inhomogeneous branch for case 1a: a = e^x A(y) + P. Substituting into the
// metrizability system leaves e^x times (linear in A) + beta(y), with
// beta = e^{-x} (residual of P). det_m vanishes because the partner's weighted
// tensor solves the homogeneous part.
inline ProlongationRows prolongation_rows_inhomogeneous(double c, double y, int degree = 5) {
  if (c == 0) throw ParamConstraintViolation("c must be nonzero");
  CaseParams p;
  p.c = c;
  const CatalogEntry e = make_case(CaseId::T1_1a, p);
  const ProjectiveConnection K = adapted_connection(e, y, degree - 1);
  const Point pt{0.0, y};
  const JetD x = JetD::variable_x(pt, degree), yy = JetD::variable_y(pt, degree);
  const auto r = metrizability_residual_jets(K, partial_solution_1a(c, x, yy));
  const JetD emx = exp(x * -1.0).truncated(r[0].degree());
  const JetD b1 = r[0] * emx;
  const std::array<JetD, 3> t{-(r[1] * emx), r[2] * emx * -0.5, -(r[3] * emx)};
  return detail::prolong(K.K, 1.0L, &t, &b1);
}

// ---------------------------------------------------------------------------
// Quadratic integrals of (Y + x) dx dy: the reduced ODE on Y
//   6 Y a2 - 3 a1 + (3 b1 + 24 a2 y) Y' + (2 b0 + 2 b1 y + 8 a2 y^2) Y'' = 0.
// Y is a jet in the y variable; its center gives y.

inline double jordan_integral_ode_residual(const JetD& Y, double alpha1, double alpha2, double beta0, double beta1) {
  if (Y.degree() < 2) throw DegreeMismatch("the reduced ODE needs Y to second order");
  const double y = Y.center().y, Y0 = Y.value(), Y1 = Y.coeff(0, 1), Y2 = 2 * Y.coeff(0, 2);
  return 6 * Y0 * alpha2 - 3 * alpha1 + (3 * beta1 + 24 * alpha2 * y) * Y1 +
         (2 * beta0 + 2 * beta1 * y + 8 * alpha2 * y * y) * Y2;
}

// The residual is linear in (alpha1, alpha2, beta0, beta1); this is its gradient.
inline std::array<double, 4> jordan_integral_ode_row(const JetD& Y) {
  if (Y.degree() < 2) throw DegreeMismatch("the reduced ODE needs Y to second order");
  const double y = Y.center().y, Y0 = Y.value(), Y1 = Y.coeff(0, 1), Y2 = 2 * Y.coeff(0, 2);
  return {-3.0, 6 * Y0 + 24 * y * Y1 + 8 * y * y * Y2, 2 * Y2, 3 * Y1 + 2 * y * Y2};
}

inline JetD jordan_Y_jet(const RealFn& Y, double y, int degree = 2) {
  return Y(JetD::variable_y(Point{0.0, y}, degree));
}

struct OdeResponse {
  double sigma_min = 0;
  // min over unit coefficient vectors theta of max_i |row_i . theta|
  double min_max_residual = 0;
  std::array<double, 4> weakest_direction{};
  int samples = 0;
};

// The minimax is 1 / max |theta| over the polytope |row_i . theta| <= 1, and a convex
// function on a polytope peaks at a vertex, so enumerating 4-row subsets is exact.
inline OdeResponse jordan_integral_ode_response(const std::vector<std::array<double, 4>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < 4) throw IllConditionedFit("need at least four sample rows");
  if (n > 40) throw IllConditionedFit("vertex enumeration is limited to 40 sample rows");
  Eigen::MatrixXd A(n, 4);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  OdeResponse r;
  r.samples = static_cast<int>(n);
  r.sigma_min = svd.singularValues()(3);
  if (!(r.sigma_min > 0)) return r;

  double best = 0;
  Eigen::Vector4d arg = Eigen::Vector4d::Zero();
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = a + 1; b < n; ++b)
      for (Eigen::Index c = b + 1; c < n; ++c)
        for (Eigen::Index d = c + 1; d < n; ++d) {
          Eigen::Matrix4d M;
          M << A.row(a), A.row(b), A.row(c), A.row(d);
          const Eigen::FullPivLU<Eigen::Matrix4d> lu(M);
          if (!lu.isInvertible()) continue;
          for (int signs = 0; signs < 16; ++signs) {
            Eigen::Vector4d rhs;
            for (int k = 0; k < 4; ++k) rhs[k] = (signs >> k & 1) ? 1.0 : -1.0;
            const Eigen::Vector4d th = lu.solve(rhs);
            if (th.norm() <= best) continue;
            if ((A * th).cwiseAbs().maxCoeff() > 1 + 1e-9) continue;
            best = th.norm();
            arg = th;
          }
        }
  if (best == 0) return r;
  r.min_max_residual = 1 / best;
  for (int k = 0; k < 4; ++k) r.weakest_direction[static_cast<std::size_t>(k)] = arg[k] / best;
  return r;
}

// ---------------------------------------------------------------------------
// Integrals of a null-form metric f dx dy: F = a p_x^2 + b p_x p_y + c p_y^2
// commutes with H iff
//   a_y = 0,  f a_x + f b_y + 2 f_x a + f_y b = 0,
//   f b_x + f c_y + f_x b + 2 f_y c = 0,  c_x = 0.

struct BirkhoffCheck {
  double a_y = 0;
  double c_x = 0;
  double bracket = 0;  // largest coefficient of {p_x p_y / f, F} as a cubic in the momenta
  bool precondition_ok = false;
  std::optional<double> bf_gradient;  // |d(b f)| when a and c vanish at the point
};

inline BirkhoffCheck birkhoff_form_check(const MetricField& g, const MomentumQuadratic& F, Point p,
                                         double bracket_tol = 1e-9, double null_tol = 1e-12) {
  const JetD x = JetD::variable_x(p, 1), y = JetD::variable_y(p, 1);
  const SymJet gj = g.jets(x, y);
  const double off = std::abs(gj.m12.value());
  if (std::abs(gj.m11.value()) > null_tol * off || std::abs(gj.m22.value()) > null_tol * off)
    throw NotNullForm("metric has a dx^2 or dy^2 component at (" + std::to_string(p.x) + ", " +
                      std::to_string(p.y) + ")");
  const JetD f = gj.m12 * 2.0;
  const auto q = F(x, y);
  const JetD &a = q[0], &b = q[1], &c = q[2];
  const double fv = f.value(), fx = f.coeff(1, 0), fy = f.coeff(0, 1);
  const double ax = a.coeff(1, 0), ay = a.coeff(0, 1), bx = b.coeff(1, 0), by = b.coeff(0, 1);
  const double cx = c.coeff(1, 0), cy = c.coeff(0, 1);
  BirkhoffCheck r;
  r.a_y = ay;
  r.c_x = cx;
  const double e2 = fv * ax + fv * by + 2 * fx * a.value() + fy * b.value();
  const double e3 = fv * bx + fv * cy + fx * b.value() + 2 * fy * c.value();
  r.bracket = std::max({std::abs(fv * ay), std::abs(e2), std::abs(e3), std::abs(fv * cx)}) / (fv * fv);
  r.precondition_ok = r.bracket < bracket_tol;
  if (std::abs(a.value()) <= null_tol && std::abs(c.value()) <= null_tol) {
    const JetD bf = b * f;
    r.bf_gradient = std::hypot(bf.coeff(1, 0), bf.coeff(0, 1));
  }
  return r;
}

}  // namespace projlie
