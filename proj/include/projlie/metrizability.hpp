#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "projlie/errors.hpp"
#include "projlie/geometry.hpp"
#include "projlie/jet.hpp"

namespace projlie {

// a = g / det(g)^{2/3}, entries (a11, a12, a22) in the SymJet slots.
using WeightedTensor = SymJet;

// det^{2/3} is taken as the square of the real cube root, i.e. |det|^{2/3}.
// Then det(a) = cbrt(det g)^{-1} and g = a / det(a)^2 inverts the map for
// either signature.
inline JetD det_two_thirds(const SymJet& g) {
  const JetD c = cbrt(g.det());
  return c * c;
}

inline WeightedTensor a_from_metric(const SymJet& g) {
  require_nondegenerate(g, "a_from_metric");
  return g.divided(det_two_thirds(g));
}

inline WeightedTensor a_from_metric(const MetricField& g, Point p, int degree = 1) {
  return a_from_metric(g.jets(p, degree));
}

inline SymJet metric_from_a(const WeightedTensor& a) {
  const double d = a.m11.value() * a.m22.value() - a.m12.value() * a.m12.value();
  const double scale = std::max({std::abs(a.m11.value()), std::abs(a.m12.value()), std::abs(a.m22.value())});
  if (!(std::abs(d) > 1e-12 * scale * scale))
    throw DegenerateSolution("det(a) vanishes: the solution corresponds to no metric here");
  const JetD det = a.det();
  return a.divided(det * det);
}

// Left-hand sides of the four linear equations, as jets of degree
// min(deg a - 1, deg K).
inline std::array<JetD, 4> metrizability_residual_jets(const ProjectiveConnection& Kc, const WeightedTensor& a) {
  const int d = std::min(a.degree() - 1, Kc.K[0].degree());
  if (d < 0) throw DegreeMismatch("metrizability residual needs a of degree >= 1");
  const SymJet a1 = a.truncated(d + 1);
  const SymJet at = a.truncated(d);
  JetD K[4];
  for (int i = 0; i < 4; ++i) K[i] = Kc.K[static_cast<std::size_t>(i)].truncated(d);
  const JetD &a11 = at.m11, &a12 = at.m12, &a22 = at.m22;
  const double t3 = 2.0 / 3.0, f3 = 4.0 / 3.0;
  return {
      a1.m11.dx() - K[1] * a11 * t3 + K[0] * a12 * 2.0,
      a1.m11.dy() + a1.m12.dx() * 2.0 - K[2] * a11 * f3 + K[1] * a12 * t3 + K[0] * a22 * 2.0,
      a1.m12.dy() * 2.0 + a1.m22.dx() - K[3] * a11 * 2.0 - K[2] * a12 * t3 + K[1] * a22 * f3,
      a1.m22.dy() - K[3] * a12 * 2.0 + K[2] * a22 * t3,
  };
}

struct MetrizabilityResidual {
  std::array<double, 4> r{};
  // Largest absolute value among the individual terms of each equation.
  std::array<double, 4> scale{};
  double max_abs() const {
    double m = 0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  }
  double max_relative() const {
    double m = 0;
    for (int i = 0; i < 4; ++i)
      m = std::max(m, std::abs(r[static_cast<std::size_t>(i)]) / std::max(scale[static_cast<std::size_t>(i)], 1e-300));
    return m;
  }
};

inline MetrizabilityResidual metrizability_residual(const ProjectiveConnection& Kc, const WeightedTensor& a) {
  const auto rj = metrizability_residual_jets(Kc, a);
  MetrizabilityResidual out;
  for (int i = 0; i < 4; ++i) out.r[static_cast<std::size_t>(i)] = rj[static_cast<std::size_t>(i)].value();
  const double K0 = std::abs(Kc.K[0].value()), K1 = std::abs(Kc.K[1].value()), K2 = std::abs(Kc.K[2].value()),
               K3 = std::abs(Kc.K[3].value());
  const double a11 = std::abs(a.m11.value()), a12 = std::abs(a.m12.value()), a22 = std::abs(a.m22.value());
  const double a11x = std::abs(a.m11.coeff(1, 0)), a11y = std::abs(a.m11.coeff(0, 1));
  const double a12x = std::abs(a.m12.coeff(1, 0)), a12y = std::abs(a.m12.coeff(0, 1));
  const double a22x = std::abs(a.m22.coeff(1, 0)), a22y = std::abs(a.m22.coeff(0, 1));
  out.scale = {std::max({a11x, K1 * a11 * 2 / 3, 2 * K0 * a12}),
               std::max({a11y, 2 * a12x, K2 * a11 * 4 / 3, K1 * a12 * 2 / 3, 2 * K0 * a22}),
               std::max({2 * a12y, a22x, 2 * K3 * a11, K2 * a12 * 2 / 3, K1 * a22 * 4 / 3}),
               std::max({a22y, 2 * K3 * a12, K2 * a22 * 2 / 3})};
  return out;
}

// Residual of a = a_from_metric(h) against the projective connection of g.
inline MetrizabilityResidual metrizability_residual(const MetricField& g, const MetricField& h, Point p) {
  return metrizability_residual(projective_connection(g, p, 1), a_from_metric(h, p, 1));
}

// L_v a = det^{-2/3} (L_v g - (2/3) tr_g(L_v g) g).
inline WeightedTensor lie_derivative_a(const SymJet& g, const std::array<JetD, 2>& v) {
  require_nondegenerate(g, "lie_derivative_a");
  const SymJet Lg = lie_derivative(g, v);
  const int d = Lg.degree();
  const SymJet gt = g.truncated(d);
  const SymJet gi = inverse(gt);
  const JetD tr = gi.m11 * Lg.m11 + gi.m12 * Lg.m12 * 2.0 + gi.m22 * Lg.m22;
  const JetD w = det_two_thirds(gt);
  return (Lg - gt.scaled(tr * (2.0 / 3.0))).divided(w);
}

inline WeightedTensor lie_derivative_a(const MetricField& g, const VectorField& v, Point p, int degree = 1) {
  return lie_derivative_a(g.jets(p, degree), v.jets(p, degree));
}

// Sum of weighted a-images mapped back to a metric.
inline SymJet combine_metric_jets(const std::vector<std::pair<SymJet, double>>& inputs) {
  if (inputs.empty()) throw UndefinedCombination("no metrics to combine");
  WeightedTensor sum = a_from_metric(inputs[0].first) * inputs[0].second;
  for (std::size_t i = 1; i < inputs.size(); ++i) sum = sum + a_from_metric(inputs[i].first) * inputs[i].second;
  try {
    return metric_from_a(sum);
  } catch (const DegenerateSolution&) {
    throw UndefinedCombination("the weighted sum of a-images is degenerate");
  }
}

// The combination as a metric field, evaluable like any other.
inline MetricField combine_metrics(const std::vector<std::pair<MetricField, double>>& inputs, std::string name = {}) {
  if (inputs.size() < 1 || inputs.size() > 3) throw UndefinedCombination("combine_metrics takes 1 to 3 metrics");
  if (name.empty()) {
    name = "combination(";
    for (std::size_t i = 0; i < inputs.size(); ++i)
      name += (i ? "," : "") + inputs[i].first.name() + ":" + std::to_string(inputs[i].second);
    name += ")";
  }
  auto f = [inputs](const JetD& x, const JetD& y) {
    std::vector<std::pair<SymJet, double>> jets;
    for (const auto& [g, w] : inputs) jets.emplace_back(g.jets(x, y), w);
    return combine_metric_jets(jets);
  };
  const MetricField& g0 = inputs[0].first;
  return MetricField(std::move(name), f, g0.signature(), g0.domain());
}

// I(xi) = det(g)^{2/3} a(xi, xi) with the same branch as a_from_metric.
inline double quadratic_integral(const Eigen::Matrix2d& g, const Eigen::Matrix2d& a, const Eigen::Vector2d& xi) {
  const double w = std::pow(std::cbrt(g.determinant()), 2);
  return w * xi.dot(a * xi);
}

enum class LvKind { jordan_one, rotation, diagonal, scalar };

inline std::string to_string(LvKind k) {
  switch (k) {
    case LvKind::jordan_one: return "jordan_one";
    case LvKind::rotation: return "rotation";
    case LvKind::diagonal: return "diagonal";
    case LvKind::scalar: return "scalar";
  }
  return "?";
}

// Normal form of a 2x2 matrix up to basis change and a constant factor.
// `lambda` is the free parameter of the normal form; `margin` is the
// distance of the deciding quantity from its threshold, in threshold units.
struct EigenMatrix {
  LvKind kind = LvKind::scalar;
  double lambda = 0;
  Eigen::Matrix2d entries = Eigen::Matrix2d::Zero();
  double scale = 1;
  double margin = 0;
};

inline EigenMatrix normal_form(const Eigen::Matrix2d& M, double tol = 1e-8) {
  const double tr = M.trace(), det = M.determinant();
  const double norm2 = M.squaredNorm();
  const double disc = tr * tr - 4 * det;
  const double dthr = tol * norm2;
  EigenMatrix e;
  if (std::abs(disc) <= dthr) {
    const double mu = tr / 2;
    const double nil = (M - mu * Eigen::Matrix2d::Identity()).norm();
    const double nthr = std::sqrt(tol) * std::sqrt(norm2);
    e.scale = mu;
    e.margin = std::min(dthr / std::max(std::abs(disc), 1e-300), std::abs(nil - nthr) / nthr);
    if (nil > nthr) {
      e.kind = LvKind::jordan_one;
      e.entries << 1, 1, 0, 1;
    } else {
      e.kind = LvKind::scalar;
      e.entries = Eigen::Matrix2d::Identity();
    }
    return e;
  }
  e.margin = std::abs(disc) / dthr;
  if (disc < 0) {
    const double re = tr / 2, im = std::sqrt(-disc) / 2;
    e.kind = LvKind::rotation;
    e.lambda = re / im;
    e.scale = im;
    e.entries << e.lambda, -1, 1, e.lambda;
  } else {
    double e1 = (tr + std::copysign(std::sqrt(disc), tr)) / 2;
    double e2 = det / e1;
    if (std::abs(e1) < std::abs(e2)) std::swap(e1, e2);
    e.kind = LvKind::diagonal;
    e.lambda = e1 / e2;
    e.scale = e2;
    e.entries << e.lambda, 0, 0, 1;
  }
  return e;
}

// The fitted matrix rewritten in the given basis, after the constant
// rescaling of v and of the second basis element that brings it closest to
// the normal form of `kind`. Entries that the normal form fixes to 0 stay as
// fitted, so a wrong basis shows up here.
inline Eigen::Matrix2d basis_normalized(const Eigen::Matrix2d& M, LvKind kind) {
  Eigen::Matrix2d r = M;
  switch (kind) {
    case LvKind::jordan_one: {
      const double s = M(1, 1);
      const double k = M(0, 1) / s;  // rescale of the second element
      r << M(0, 0) / s, 1, M(1, 0) * k / s, M(1, 1) / s;
      break;
    }
    case LvKind::rotation: {
      const double s = std::sqrt(std::abs(M(0, 1) * M(1, 0)));
      r << M(0, 0) / s, -1, -M(1, 0) * M(0, 1) / (s * s), M(1, 1) / s;
      break;
    }
    case LvKind::diagonal: {
      // Order the basis so that the normalized eigenvalue ratio is >= 1 in modulus.
      if (std::abs(M(0, 0)) >= std::abs(M(1, 1))) {
        r = M / M(1, 1);
      } else {
        r << M(1, 1), M(1, 0), M(0, 1), M(0, 0);
        r /= M(0, 0);
      }
      break;
    }
    case LvKind::scalar:
      r = M / M(1, 1);
      break;
  }
  return r;
}

struct LvFit {
  Eigen::MatrixXd M;
  double residual = 0;   // relative Frobenius residual of the least-squares fit
  double condition = 0;  // condition number of the column-equilibrated Gram matrix
};

// Least-squares M with L_v a_i = sum_j M_ij a_j over the sample points.
inline LvFit fit_lv_matrix(const std::vector<MetricField>& basis, const VectorField& v,
                           const std::vector<Point>& points) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  if (n < 1) throw IllConditionedFit("empty basis");
  if (points.size() < 6) throw IllConditionedFit("fit_lv_matrix needs at least 6 sample points");
  const auto rows = static_cast<Eigen::Index>(3 * points.size());
  Eigen::MatrixXd X(rows, n), Y(rows, n);
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::vector<WeightedTensor> a, La;
    double w = 0;
    for (const auto& g : basis) {
      const SymJet gj = g.jets(points[p], 1);
      const auto vj = v.jets(points[p], 1);
      a.push_back(a_from_metric(gj));
      La.push_back(lie_derivative_a(gj, vj));
      w = std::max(w, a.back().value().norm());
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& aj = a[static_cast<std::size_t>(j)];
      const auto& lj = La[static_cast<std::size_t>(j)];
      const auto r = static_cast<Eigen::Index>(3 * p);
      X(r, j) = aj.m11.value() / w;
      X(r + 1, j) = aj.m12.value() / w;
      X(r + 2, j) = aj.m22.value() / w;
      Y(r, j) = lj.m11.value() / w;
      Y(r + 1, j) = lj.m12.value() / w;
      Y(r + 2, j) = lj.m22.value() / w;
    }
  }
  Eigen::VectorXd colnorm = X.colwise().norm();
  Eigen::MatrixXd Xe = X;
  for (Eigen::Index j = 0; j < n; ++j) Xe.col(j) /= colnorm(j);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xe);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  const double cond = smin > 0 ? std::pow(sv(0) / smin, 2) : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e10))
    throw IllConditionedFit("basis Gram matrix condition number " + std::to_string(cond) + " exceeds 1e10");
  const Eigen::MatrixXd Mt = X.colPivHouseholderQr().solve(Y);
  LvFit fit;
  fit.M = Mt.transpose();
  fit.residual = (X * Mt - Y).norm() / std::max(Y.norm(), 1e-300);
  fit.condition = cond;
  return fit;
}

}  // namespace projlie
