#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "projlie/errors.hpp"
#include "projlie/geometry.hpp"
#include "projlie/jet.hpp"
#include "projlie/metrizability.hpp"
#include "projlie/quadrature.hpp"

namespace projlie {

enum class CaseId {
  T1_1a, T1_1b, T1_1c,
  T1_2a, T1_2b, T1_2c,
  T1_3a, T1_3b, T1_3c, T1_3d,
  APP_LIOUVILLE, APP_COMPLEX, APP_JORDAN, APP_JORDAN_REMB,
};

inline const std::vector<CaseId>& all_cases() {
  static const std::vector<CaseId> ids = {
      CaseId::T1_1a, CaseId::T1_1b, CaseId::T1_1c, CaseId::T1_2a, CaseId::T1_2b,
      CaseId::T1_2c, CaseId::T1_3a, CaseId::T1_3b, CaseId::T1_3c, CaseId::T1_3d,
      CaseId::APP_LIOUVILLE, CaseId::APP_COMPLEX, CaseId::APP_JORDAN, CaseId::APP_JORDAN_REMB};
  return ids;
}

inline std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::T1_1a: return "T1_1a";
    case CaseId::T1_1b: return "T1_1b";
    case CaseId::T1_1c: return "T1_1c";
    case CaseId::T1_2a: return "T1_2a";
    case CaseId::T1_2b: return "T1_2b";
    case CaseId::T1_2c: return "T1_2c";
    case CaseId::T1_3a: return "T1_3a";
    case CaseId::T1_3b: return "T1_3b";
    case CaseId::T1_3c: return "T1_3c";
    case CaseId::T1_3d: return "T1_3d";
    case CaseId::APP_LIOUVILLE: return "APP_LIOUVILLE";
    case CaseId::APP_COMPLEX: return "APP_COMPLEX";
    case CaseId::APP_JORDAN: return "APP_JORDAN";
    case CaseId::APP_JORDAN_REMB: return "APP_JORDAN_REMB";
  }
  return "?";
}

inline std::optional<CaseId> case_from_string(const std::string& s) {
  for (CaseId id : all_cases())
    if (to_string(id) == s) return id;
  return std::nullopt;
}

inline bool is_projective_case(CaseId id) {
  return id != CaseId::APP_LIOUVILLE && id != CaseId::APP_COMPLEX && id != CaseId::APP_JORDAN &&
         id != CaseId::APP_JORDAN_REMB;
}

// Named univariate functions usable as free data of the normal forms.
using RealFn = std::function<JetD(const JetD&)>;
using ComplexFn = std::function<JetC(const JetC&)>;

inline RealFn real_function(const std::string& name) {
  static const std::map<std::string, RealFn> table = {
      {"tan", [](const JetD& t) { return tan(t); }},
      {"exp", [](const JetD& t) { return exp(t); }},
      {"sin", [](const JetD& t) { return sin(t); }},
      {"cos", [](const JetD& t) { return cos(t); }},
      {"atan", [](const JetD& t) { return atan(t); }},
      {"identity", [](const JetD& t) { return t; }},
      {"square", [](const JetD& t) { return t * t; }},
      {"cube", [](const JetD& t) { return t * t * t; }},
      {"zero", [](const JetD& t) { return t * 0.0; }},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ParamConstraintViolation("unknown real function '" + name + "'");
  return it->second;
}

inline ComplexFn complex_function(const std::string& name) {
  static const std::map<std::string, ComplexFn> table = {
      {"tan", [](const JetC& z) { return tan(z); }},
      {"exp", [](const JetC& z) { return exp(z); }},
      {"sin", [](const JetC& z) { return sin(z); }},
      {"identity", [](const JetC& z) { return z; }},
      {"square", [](const JetC& z) { return z * z; }},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ParamConstraintViolation("unknown complex function '" + name + "'");
  return it->second;
}

// f'(u) for a univariate f given as a jet function.
inline JetD derivative_of(const RealFn& f, const JetD& u) {
  const int D = u.degree();
  const JetD s = f(JetD::variable_x(Point{u.value(), 0.0}, D + 1));
  std::vector<double> d(static_cast<std::size_t>(D) + 1);
  for (int k = 0; k <= D; ++k) d[static_cast<std::size_t>(k)] = (k + 1) * s.coeff(k + 1, 0);
  return detail::compose(u, d);
}

struct CaseParams {
  double c = 1.0;
  double lambda = 0.5;
  double nu = 0.5;
  double eta = 1.0 / 3.0;
  double C_phase = 0.7;  // C = exp(i * C_phase)
  int epsilon = 1;
  std::optional<double> y0;  // lower limit of the integral terms (cases 3a, 3b)
  // Free data of the integrable normal forms.
  std::string X = "tan";
  std::string Y = "exp";
  std::string h = "tan";
  std::string Yj = "sin";
  int sign = 1;  // the +- of the Liouville normal form
};

// Quadratic-in-momenta function a p_x^2 + b p_x p_y + c p_y^2.
using IntegralEvaluator = std::function<std::array<JetD, 3>(const JetD& x, const JetD& y)>;

struct CatalogEntry {
  CaseId id{};
  CaseParams params;
  MetricField g;
  std::optional<VectorField> v;
  std::vector<MetricField> partners;  // canonical partner first; the extra metric of 3d second
  LvKind expected_kind = LvKind::scalar;
  std::optional<double> expected_lambda;   // normal-form parameter where the catalog fixes it
  std::optional<double> homothety_factor;  // kappa with L_v g = kappa g, when v is a homothety
  std::optional<IntegralEvaluator> integral;  // tabulated integral of the normal forms
  std::optional<RealFn> jordan_Y;             // Y of the form (Y + x) dx dy, cases 3a-3d
  Domain domain;
};

namespace detail {

// Degenerate free data (e.g. Y = 0 in the Jordan form) leaves the partner
// undefined; the entry is still built and the error surfaces on evaluation.
inline Signature signature_at(const MetricField& g, Point p) {
  Eigen::Matrix2d m;
  try {
    m = g.matrix(p);
  } catch (const Error&) {
    return Signature::riemannian;
  }
  if (m.determinant() < 0) return Signature::lorentzian;
  return m(0, 0) > 0 ? Signature::riemannian : Signature::negative;
}

inline Domain box(double x0, double x1, double y0, double y1, std::function<std::string(Point)> pred = {}) {
  Domain d{x0, x1, y0, y1, {}};
  d.violation = [x0, x1, y0, y1, pred](Point p) {
    if (p.x < x0 || p.x > x1 || p.y < y0 || p.y > y1) return std::string("outside sampling box");
    return pred ? pred(p) : std::string{};
  };
  return d;
}

// (X - Y)(X1 dx^2 + Y1 dy^2) and its partner (1/X - 1/Y)(X1/X dx^2 + Y1/Y dy^2).
struct LiouvilleData {
  RealFn X, Y, X1, Y1;
};

inline MetricField::Evaluator liouville_metric(const LiouvilleData& d) {
  return [d](const JetD& x, const JetD& y) {
    const JetD X = d.X(x), Y = d.Y(y);
    const JetD w = X - Y;
    return SymJet{w * d.X1(x), x * 0.0, w * d.Y1(y)};
  };
}

inline MetricField::Evaluator liouville_partner(const LiouvilleData& d) {
  return [d](const JetD& x, const JetD& y) {
    const JetD X = d.X(x), Y = d.Y(y);
    const JetD w = 1.0 / X - 1.0 / Y;
    return SymJet{w * d.X1(x) / X, x * 0.0, w * d.Y1(y) / Y};
  };
}

// (h - conj h)(h1 dz^2 - conj(h1) dzbar^2) written in x, y.
inline MetricField::Evaluator complex_liouville_metric(const ComplexFn& h, const ComplexFn& h1) {
  return [h, h1](const JetD& x, const JetD& y) {
    const JetD ih = imag_part(holomorphic(h, x, y));
    const JetC k = holomorphic(h1, x, y);
    const JetD u = real_part(k), v = imag_part(k);
    return SymJet{ih * v * -4.0, ih * u * -4.0, ih * v * 4.0};
  };
}

inline MetricField::Evaluator complex_liouville_partner(const ComplexFn& h, const ComplexFn& h1) {
  ComplexFn hp = [h](const JetC& z) { return 1.0 / h(z); };
  ComplexFn h1p = [h, h1](const JetC& z) { return h1(z) / h(z); };
  return complex_liouville_metric(hp, h1p);
}

// (Y + x) dx dy and the partner -2 (Y + x)/y^3 dx dy + (Y + x)^2 / y^4 dy^2.
inline MetricField::Evaluator jordan_metric(const RealFn& Y) {
  return [Y](const JetD& x, const JetD& y) {
    const JetD w = Y(y) + x;
    return SymJet{x * 0.0, w * 0.5, x * 0.0};
  };
}

inline MetricField::Evaluator jordan_partner(const RealFn& Y) {
  return [Y](const JetD& x, const JetD& y) {
    const JetD w = Y(y) + x;
    const JetD y2 = y * y;
    return SymJet{x * 0.0, -w / (y2 * y), w * w / (y2 * y2)};
  };
}

// The additional metric of case 3d, Y = y^2.
inline MetricField::Evaluator extra_metric_3d() {
  return [](const JetD& x, const JetD& y) {
    const JetD y2 = y * y;
    const JetD s = y2 + x;
    const JetD q = x * 3.0 - y2;
    const JetD q2 = q * q;
    const JetD q6 = q2 * q2 * q2;
    return SymJet{s * s * 9.0 / q6, -(y * (x * 9.0 + y2) * s * 2.0) / q6, x * s * s * 12.0 / q6};
  };
}

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace detail

// Momentum form of I(xi) = gbar(xi, xi) (det g / det gbar)^{2/3}.
inline IntegralEvaluator integral_from_pair(const MetricField& g, const MetricField& gbar) {
  return [g, gbar](const JetD& x, const JetD& y) {
    const SymJet G = g.jets(x, y), B = gbar.jets(x, y);
    const JetD c = cbrt(G.det() / B.det());
    const JetD w = c * c;
    const SymJet gi = inverse(G);
    // Q = w g^{-1} B g^{-1}
    auto q = [&](int i, int j) {
      JetD s = x * 0.0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) s += gi(i, k) * B(k, l) * gi(l, j);
      return s * w;
    };
    return std::array<JetD, 3>{q(0, 0), q(0, 1) * 2.0, q(1, 1)};
  };
}

inline void check_params(CaseId id, const CaseParams& p) {
  auto fail = [&](const std::string& what) {
    throw ParamConstraintViolation(to_string(id) + ": " + what);
  };
  const double C_re = std::cos(p.C_phase);
  const bool C_is_pm1 = std::abs(std::sin(p.C_phase)) < 1e-12 && std::abs(std::abs(C_re) - 1) < 1e-12;
  if (p.c == 0.0 || !std::isfinite(p.c)) fail("c must be a nonzero real (constants: c in R \\ {0})");
  if (p.epsilon != 1 && p.epsilon != -1) fail("epsilon must be +1 or -1");
  switch (id) {
    case CaseId::T1_1b:
      if (p.lambda == 0.0 && std::abs(std::abs(p.c) - 1.0) < 1e-12)
        fail("lambda = 0 requires c != +-1 (case 1b exclusion)");
      break;
    case CaseId::T1_2b:
      if (p.lambda == 0.0 && C_is_pm1) fail("lambda = 0 requires C != +-1 (case 2b exclusion)");
      break;
    case CaseId::T1_1c:
    case CaseId::T1_2c:
      if (!(p.nu > 0.0 && p.nu <= 4.0)) fail("nu must lie in (0, 4]");
      if (p.nu == 1.0) fail("nu must differ from 1");
      if (id == CaseId::T1_1c && p.nu == 2.0 && p.c == -p.epsilon)
        fail("nu = 2 requires c != -epsilon (case 1c exclusion)");
      if (id == CaseId::T1_2c && p.nu == 2.0 && C_is_pm1) fail("nu = 2 requires C != +-1 (case 2c exclusion)");
      break;
    case CaseId::T1_3c:
      if (!(p.eta > 0.0 && p.eta <= 4.0)) fail("eta must lie in (0, 4]");
      if (p.eta == 0.5 || p.eta == 1.0) fail("eta must avoid {1/2, 1}");
      break;
    case CaseId::T1_3a:
      if (p.y0 && (*p.y0 == 0.0 || *p.y0 == 3.0)) fail("y0 must avoid the excluded points {0, 3}");
      break;
    case CaseId::T1_3b:
      if (p.y0 && *p.y0 == 3.0 * p.lambda) fail("y0 must avoid the excluded point 3 lambda");
      break;
    case CaseId::APP_LIOUVILLE:
      if (p.sign != 1 && p.sign != -1) fail("sign must be +1 or -1");
      break;
    default:
      break;
  }
}

inline CatalogEntry make_case(CaseId id, const CaseParams& params = {}) {
  using detail::fmt;
  check_params(id, params);
  CatalogEntry e;
  e.id = id;
  e.params = params;
  const CaseParams& p = params;
  const std::string tag = to_string(id);
  const cplx C = std::polar(1.0, p.C_phase);
  MetricField::Evaluator gf, pf;
  Point ref;

  switch (id) {
    case CaseId::T1_1a:
    case CaseId::T1_1b:
    case CaseId::T1_1c: {
      detail::LiouvilleData d;
      const double c = p.c, lam = p.lambda, nu = p.nu;
      const double eps = p.epsilon;
      if (id == CaseId::T1_1a) {
        d = {[](const JetD& x) { return 1.0 / x; }, [](const JetD& y) { return 1.0 / y; },
             [c](const JetD& x) { return exp(x * -3.0) / x * c; }, [](const JetD& y) { return exp(y * -3.0) / y; }};
        e.domain = detail::box(0.2, 5, 0.2, 5, [](Point q) {
          return std::abs(q.x - q.y) > 0.1 ? std::string{} : std::string("|x - y| <= 0.1");
        });
        e.expected_kind = LvKind::jordan_one;
        ref = {1.0, 2.0};
      } else if (id == CaseId::T1_1b) {
        d = {[](const JetD& x) { return tan(x); }, [](const JetD& y) { return tan(y); },
             [c, lam](const JetD& x) { return exp(x * (-3.0 * lam)) / cos(x) * c; },
             [lam](const JetD& y) { return exp(y * (-3.0 * lam)) / cos(y); }};
        e.domain = detail::box(-1.4, 1.4, -1.4, 1.4, [](Point q) {
          if (std::abs(std::cos(q.x)) <= 0.1 || std::abs(std::cos(q.y)) <= 0.1) return std::string("|cos| <= 0.1");
          if (std::abs(std::tan(q.x)) <= 0.05 || std::abs(std::tan(q.y)) <= 0.05) return std::string("|tan| <= 0.05");
          if (std::abs(std::tan(q.x) - std::tan(q.y)) <= 0.1) return std::string("|tan x - tan y| <= 0.1");
          return std::string{};
        });
        e.expected_kind = LvKind::rotation;
        e.expected_lambda = lam;
        ref = {0.9, -0.4};
      } else {
        d = {[c, nu](const JetD& x) { return exp(x * nu) * c; }, [nu](const JetD& y) { return exp(y * nu); },
             [](const JetD& x) { return exp(x * 2.0); }, [eps](const JetD& y) { return exp(y * 2.0) * eps; }};
        e.domain = detail::box(-1, 1, -1, 1, [c, nu](Point q) {
          const double X = c * std::exp(nu * q.x), Y = std::exp(nu * q.y);
          return std::abs(X - Y) > 0.05 * (std::abs(X) + std::abs(Y)) ? std::string{} : std::string("X ~ Y");
        });
        e.expected_kind = LvKind::diagonal;
        e.expected_lambda = (2 + nu) / (2 - 2 * nu);
        e.homothety_factor = nu + 2;
        ref = {0.6, -0.5};
      }
      gf = detail::liouville_metric(d);
      pf = detail::liouville_partner(d);
      e.v = VectorField([](const JetD& x, const JetD&) {
        return std::array<JetD, 2>{x * 0.0 + 1.0, x * 0.0 + 1.0};
      });
      break;
    }
    case CaseId::T1_2a:
    case CaseId::T1_2b:
    case CaseId::T1_2c: {
      ComplexFn h, h1;
      const double lam = p.lambda, nu = p.nu, phase = p.C_phase;
      if (id == CaseId::T1_2a) {
        h = [](const JetC& z) { return cplx(1.0) / z; };
        h1 = [C](const JetC& z) { return exp(z * cplx(-3.0)) / z * C; };
        e.domain = detail::box(0.3, 2, 0.3, 2);
        e.expected_kind = LvKind::jordan_one;
        ref = {1.0, 0.8};
      } else if (id == CaseId::T1_2b) {
        h = [](const JetC& z) { return tan(z); };
        h1 = [C, lam](const JetC& z) { return exp(z * cplx(-3.0 * lam)) / cos(z) * C; };
        e.domain = detail::box(-1, 1, 0.2, 1.2);
        e.expected_kind = LvKind::rotation;
        e.expected_lambda = lam;
        ref = {0.3, 0.6};
      } else {
        h = [C, nu](const JetC& z) { return exp(z * cplx(nu)) * C; };
        h1 = [](const JetC& z) { return exp(z * cplx(2.0)); };
        e.domain = detail::box(-1, 1, -1, 1, [nu, phase](Point q) {
          return std::abs(std::sin(phase + nu * q.y)) > 0.1 ? std::string{} : std::string("Im h ~ 0");
        });
        e.expected_kind = LvKind::diagonal;
        e.expected_lambda = (2 + nu) / (2 - 2 * nu);
        e.homothety_factor = nu + 2;
        ref = {0.1, (std::numbers::pi / 2 - phase) / nu};
        if (!e.domain.contains(ref)) ref = {0.1, 0.05};
      }
      gf = detail::complex_liouville_metric(h, h1);
      pf = detail::complex_liouville_partner(h, h1);
      e.v = VectorField([](const JetD& x, const JetD&) {
        return std::array<JetD, 2>{x * 0.0 + 1.0, x * 0.0};
      });
      break;
    }
    case CaseId::T1_3a:
    case CaseId::T1_3b:
    case CaseId::T1_3c:
    case CaseId::T1_3d: {
      RealFn Y;
      VectorField::Evaluator vf;
      if (id == CaseId::T1_3a || id == CaseId::T1_3b) {
        const bool is_a = id == CaseId::T1_3a;
        const double lam = p.lambda;
        const double pole = is_a ? 3.0 : 3.0 * lam;
        // Branch and sampling window: one side of the excluded points.
        double ylo, yhi, y0;
        if (is_a) {
          y0 = p.y0.value_or(5.0);
          if (y0 > 3) { ylo = 4; yhi = 10; }
          else if (y0 < 0) { ylo = -5; yhi = -1; }
          else { ylo = 0.5; yhi = 2.5; }
        } else {
          y0 = p.y0.value_or(pole + 2.0);
          if (y0 > pole) { ylo = pole + 0.5; yhi = pole + 3.5; }
          else { ylo = pole - 3.5; yhi = pole - 0.5; }
        }
        std::function<JetD(const JetD&)> weight;  // integrand times (xi - pole)^2
        if (is_a)
          weight = [](const JetD& t) { return exp(1.5 / t) * abs_pow(t, 0.5); };
        else
          weight = [lam](const JetD& t) { return exp(atan(t) * (-1.5 * lam)) * pow(t * t + 1.0, 0.25); };
        auto integrand = [weight, pole](const JetD& t) {
          const JetD s = t - pole;
          return weight(t) / (s * s);
        };
        std::vector<double> excluded = is_a ? std::vector<double>{0.0, 3.0} : std::vector<double>{pole};
        QuadratureJet I(integrand, y0, 1e-13, excluded);
        Y = [weight, pole, I](const JetD& y) { return weight(y) / (y - pole) + I(y); };
        vf = [I, pole, is_a](const JetD& x, const JetD& y) {
          const JetD v1 = (y - pole) * 0.5 * (x + I(y));
          const JetD v2 = is_a ? y * y : y * y + 1.0;
          return std::array<JetD, 2>{v1, v2};
        };
        e.domain = detail::box(-1, 1, ylo, yhi, [Y, pole](Point q) {
          if (std::abs(q.y - pole) <= 0.3 || std::abs(q.y) <= 0.3) return std::string("y too close to an excluded point");
          const double w = Y(JetD::constant(Point{q.y, 0}, 0, q.y)).value() + q.x;
          return std::abs(w) > 0.1 ? std::string{} : std::string("|Y + x| <= 0.1");
        });
        e.expected_kind = is_a ? LvKind::jordan_one : LvKind::rotation;
        if (!is_a) e.expected_lambda = lam;
        ref = {0.2, 0.5 * (ylo + yhi)};
      } else if (id == CaseId::T1_3c) {
        const double eta = p.eta;
        Y = [eta](const JetD& y) { return pow(y, 1.0 / eta); };
        vf = [eta](const JetD& x, const JetD& y) { return std::array<JetD, 2>{x, y * eta}; };
        e.domain = detail::box(0.2, 2, 0.3, 2);
        e.expected_kind = LvKind::diagonal;
        e.expected_lambda = (2 + eta) / (2 - 2 * eta);
        e.homothety_factor = 2 + eta;
        ref = {1.0, 1.2};
      } else {
        Y = [](const JetD& y) { return y * y; };
        vf = [](const JetD& x, const JetD& y) { return std::array<JetD, 2>{x * 2.0, y}; };
        // det of the extra metric is 4 (y^2 + x)^2 / (3x - y^2)^9 while its entries grow like
        // (3x - y^2)^-6, so double precision loses ~3 log10|3x - y^2| digits near the curve.
        e.domain = detail::box(0.2, 2, 0.2, 1.5, [](Point q) {
          return std::abs(3 * q.x - q.y * q.y) > 0.3 ? std::string{} : std::string("|3x - y^2| <= 0.3");
        });
        e.expected_kind = LvKind::diagonal;
        e.expected_lambda = 2.5;
        e.homothety_factor = 5.0;
        ref = {1.0, 1.0};
      }
      gf = detail::jordan_metric(Y);
      pf = detail::jordan_partner(Y);
      e.v = VectorField(vf);
      e.jordan_Y = Y;
      break;
    }
    case CaseId::APP_LIOUVILLE: {
      const RealFn X = real_function(p.X), Y = real_function(p.Y);
      const double sg = p.sign;
      gf = [X, Y, sg](const JetD& x, const JetD& y) {
        const JetD w = X(x) - Y(y);
        return SymJet{w, x * 0.0, w * sg};
      };
      pf = [X, Y, sg](const JetD& x, const JetD& y) {
        const JetD Xv = X(x), Yv = Y(y);
        const JetD w = 1.0 / Yv - 1.0 / Xv;
        return SymJet{w / Xv, x * 0.0, w / Yv * sg};
      };
      e.integral = [X, Y, sg](const JetD& x, const JetD& y) {
        const JetD Xv = X(x), Yv = Y(y);
        const JetD w = Xv - Yv;
        return std::array<JetD, 3>{Yv / w * sg, x * 0.0, Xv / w};
      };
      e.domain = detail::box(-1.2, 1.2, -1, 1, [X, Y](Point q) {
        const double Xv = X(JetD::constant(q, 0, q.x)).value(), Yv = Y(JetD::constant(q, 0, q.y)).value();
        if (std::abs(std::cos(q.x)) <= 0.1) return std::string("|cos x| <= 0.1");
        if (std::abs(Xv) <= 0.1 || std::abs(Yv) <= 0.1) return std::string("X or Y near 0");
        return std::abs(Xv - Yv) > 0.1 ? std::string{} : std::string("|X - Y| <= 0.1");
      });
      e.expected_kind = LvKind::diagonal;
      ref = {1.0, -0.5};
      break;
    }
    case CaseId::APP_COMPLEX: {
      const ComplexFn h = complex_function(p.h);
      gf = [h](const JetD& x, const JetD& y) {
        return SymJet{x * 0.0, imag_part(holomorphic(h, x, y)), x * 0.0};
      };
      pf = [h](const JetD& x, const JetD& y) {
        const JetC hv = holomorphic(h, x, y);
        const JetD re = real_part(hv), im = imag_part(hv);
        const JetD m = re * re + im * im;
        const JetD m2 = m * m;
        return SymJet{-(im * im) / m2, re * im / m2, im * im / m2};
      };
      e.integral = [h](const JetD& x, const JetD& y) {
        const JetC hv = holomorphic(h, x, y);
        return std::array<JetD, 3>{x * 0.0 + 1.0, real_part(hv) / imag_part(hv) * 2.0, x * 0.0 - 1.0};
      };
      e.domain = detail::box(-1, 1, 0.2, 1.5);
      e.expected_kind = LvKind::rotation;
      ref = {0.3, 0.7};
      break;
    }
    case CaseId::APP_JORDAN: {
      const RealFn Y = real_function(p.Yj);
      gf = [Y](const JetD& x, const JetD& y) {
        return SymJet{x * 0.0, (x * derivative_of(Y, y) + 1.0) * 0.5, x * 0.0};
      };
      pf = [Y](const JetD& x, const JetD& y) {
        const JetD s = x * derivative_of(Y, y) + 1.0;
        const JetD Yv = Y(y);
        const JetD Y2 = Yv * Yv;
        return SymJet{x * 0.0, -s / (Y2 * Yv), s * s / (Y2 * Y2)};
      };
      e.integral = [Y](const JetD& x, const JetD& y) {
        const JetD s = x * derivative_of(Y, y) + 1.0;
        return std::array<JetD, 3>{x * 0.0 + 1.0, Y(y) / s * -2.0, x * 0.0};
      };
      e.domain = detail::box(-1, 1, 0.3, 2.5, [Y](Point q) {
        const double Yv = Y(JetD::constant(q, 0, q.y)).value();
        const double s = 1 + q.x * derivative_of(Y, JetD::constant(q, 0, q.y)).value();
        if (std::abs(Yv) <= 0.1) return std::string("|Y| <= 0.1");
        return std::abs(s) > 0.1 ? std::string{} : std::string("|1 + x Y'| <= 0.1");
      });
      e.expected_kind = LvKind::jordan_one;
      ref = {0.2, 1.0};
      break;
    }
    case CaseId::APP_JORDAN_REMB: {
      const RealFn Y = real_function(p.Yj);
      gf = detail::jordan_metric(Y);
      pf = detail::jordan_partner(Y);
      e.domain = detail::box(0.5, 2, 0.3, 2.5, [Y](Point q) {
        const double w = Y(JetD::constant(q, 0, q.y)).value() + q.x;
        return std::abs(w) > 0.1 ? std::string{} : std::string("|Y + x| <= 0.1");
      });
      e.expected_kind = LvKind::jordan_one;
      ref = {1.0, 1.0};
      break;
    }
  }

  MetricField probe(tag + ".g", gf, Signature::riemannian, e.domain);
  e.g = MetricField(tag + ".g", gf, detail::signature_at(probe, ref), e.domain);
  MetricField pprobe(tag + ".gbar", pf, Signature::riemannian, e.domain);
  e.partners.push_back(MetricField(tag + ".gbar", pf, detail::signature_at(pprobe, ref), e.domain));
  if (id == CaseId::T1_3d) {
    MetricField t(tag + ".gtilde", detail::extra_metric_3d(), Signature::riemannian, e.domain);
    e.partners.push_back(MetricField(tag + ".gtilde", detail::extra_metric_3d(), detail::signature_at(t, ref), e.domain));
  }
  if (id == CaseId::APP_JORDAN_REMB) e.integral = integral_from_pair(e.g, e.partners[0]);
  return e;
}

// Integrable normal forms by kind name.
struct NormalForm {
  MetricField g, gbar;
  IntegralEvaluator F;
};

inline NormalForm integrable_normal_form(const std::string& kind, const CaseParams& data = {}) {
  CaseId id;
  if (kind == "liouville") id = CaseId::APP_LIOUVILLE;
  else if (kind == "complex") id = CaseId::APP_COMPLEX;
  else if (kind == "jordan") id = CaseId::APP_JORDAN;
  else if (kind == "jordan_remB") id = CaseId::APP_JORDAN_REMB;
  else throw ParamConstraintViolation("unknown normal form kind '" + kind + "'");
  CatalogEntry e = make_case(id, data);
  return {e.g, e.partners[0], *e.integral};
}

}  // namespace projlie
