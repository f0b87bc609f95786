#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "projlie/errors.hpp"
#include "projlie/jet.hpp"

namespace projlie {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gauss_kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kKronrodWeights[7];
  double g = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[static_cast<std::size_t>(i)];
    const double s = f(c - dx) + f(c + dx);
    k += kKronrodWeights[static_cast<std::size_t>(i)] * s;
    if (i % 2 == 1) g += kGaussWeights[static_cast<std::size_t>(i / 2)] * s;
  }
  return {k * h, std::abs((k - g) * h)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of a scalar function over [a, b].
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol, int max_intervals = 4000) {
  if (a == b) return {};
  struct Piece {
    double a, b, value, error;
  };
  auto fn = [&](double t) { return static_cast<double>(f(t)); };
  std::vector<Piece> pieces;
  auto [v0, e0] = detail::gauss_kronrod15(fn, a, b);
  pieces.push_back({a, b, v0, e0});
  int evals = 15;
  for (;;) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      total += pieces[i].value;
      err += pieces[i].error;
      if (pieces[i].error > pieces[worst].error) worst = i;
    }
    if (err <= abs_tol) return {total, err, evals};
    if (static_cast<int>(pieces.size()) >= max_intervals)
      throw QuadratureNonconvergence("adaptive quadrature did not reach tolerance");
    const Piece p = pieces[worst];
    const double m = 0.5 * (p.a + p.b);
    auto [vl, el] = detail::gauss_kronrod15(fn, p.a, m);
    auto [vr, er] = detail::gauss_kronrod15(fn, m, p.b);
    evals += 30;
    pieces[worst] = {p.a, m, vl, el};
    pieces.push_back({m, p.b, vr, er});
  }
}

// Antiderivative y -> int_{lower}^{y} f, carried as a jet. Only the value
// coefficient needs quadrature; higher coefficients come from f's jet.
class QuadratureJet {
 public:
  using Integrand = std::function<JetD(const JetD&)>;

  QuadratureJet(Integrand integrand, double lower, double value_tolerance = 1e-13,
                std::vector<double> excluded = {})
      : f_(std::move(integrand)), lower_(lower), tol_(value_tolerance), excluded_(std::move(excluded)) {}

  double lower_limit() const { return lower_; }

  double value(double y) const {
    check_path(y);
    auto scalar = [this](double t) { return f_(JetD::constant(Point{t, 0.0}, 0, t)).value(); };
    return integrate(scalar, lower_, y, tol_).value;
  }

  // The antiderivative composed with an arbitrary jet u.
  JetD operator()(const JetD& u) const {
    const int D = u.degree();
    const double t0 = u.value();
    std::vector<double> s(static_cast<std::size_t>(D) + 1, 0.0);
    s[0] = value(t0);
    if (D >= 1) {
      const JetD fj = f_(JetD::variable_x(Point{t0, 0.0}, D - 1));
      for (int k = 1; k <= D; ++k) s[static_cast<std::size_t>(k)] = fj.coeff(k - 1, 0) / k;
    }
    return detail::compose(u, s);
  }

 private:
  void check_path(double y) const {
    const double lo = std::min(lower_, y), hi = std::max(lower_, y);
    for (double e : excluded_)
      if (e >= lo && e <= hi)
        throw SingularPath("integration path [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "] crosses excluded point " + std::to_string(e));
  }

  Integrand f_;
  double lower_;
  double tol_;
  std::vector<double> excluded_;
};

}  // namespace projlie
