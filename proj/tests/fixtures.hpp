#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "projlie/geometry.hpp"

namespace fixture {

// A generic Riemannian metric written once for jets and doubles.
struct RandomMetric {
  double a[6];
  template <class T>
  std::array<T, 3> operator()(const T& x, const T& y) const {
    using std::cos;
    using std::exp;
    using std::sin;
    return {sin(x * a[0] + y * a[1]) * 0.5 + 2.0, cos(x * y * a[2]) * 0.3 + x * a[3] * 0.1,
            exp((x * a[4] - y) * 0.3) * 0.5 + 1.5 + y * y * a[5] * 0.1};
  }
  projlie::MetricField field(projlie::Domain d = {}) const {
    const RandomMetric m = *this;
    return projlie::MetricField("random", [m](const projlie::JetD& x, const projlie::JetD& y) {
      auto c = m(x, y);
      return projlie::SymJet{c[0], c[1], c[2]};
    }, projlie::Signature::riemannian, std::move(d));
  }
};

struct RandomField {
  double b[4];
  template <class T>
  std::array<T, 2> operator()(const T& x, const T& y) const {
    using std::cos;
    using std::sin;
    return {sin(y * b[0]) + x * x * b[1], cos(x * b[2]) * 0.7 + x * y * b[3]};
  }
};

inline projlie::MetricField flat(projlie::Domain d = {}) {
  using projlie::JetD;
  return projlie::MetricField("flat", [](const JetD& x, const JetD&) {
    return projlie::SymJet{x * 0.0 + 1.0, x * 0.0, x * 0.0 + 1.0};
  }, projlie::Signature::riemannian, std::move(d));
}

// Jet in y only, with the given Taylor coefficients, centered at (0, y0).
inline projlie::JetD y_poly(double y0, const std::vector<double>& coeffs, int degree) {
  projlie::JetD j(projlie::Point{0.0, y0}, degree);
  for (int k = 0; k <= degree && k < static_cast<int>(coeffs.size()); ++k) j.coeff(0, k) = coeffs[static_cast<std::size_t>(k)];
  return j;
}

// Values and the y-derivatives of a y-only connection that the closed form needs.
inline oracle::KData kdata(const projlie::ProjectiveConnection& K) {
  auto d = [&](int i, int n) { return K.K[static_cast<std::size_t>(i)].coeff(0, n) * (n == 2 ? 2.0 : 1.0); };
  return {d(0, 0), d(1, 0), d(2, 0), d(3, 0), d(0, 1), d(0, 2), d(1, 1), d(1, 2), d(2, 1), d(3, 1)};
}

}  // namespace fixture
