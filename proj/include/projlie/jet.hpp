#pragma once

// Truncated bivariate Taylor expansions ("jets") with real or complex
// coefficients. coeff(i, j) holds d^{i+j}f / dx^i dy^j divided by i! j!.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include "projlie/errors.hpp"

namespace projlie {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline constexpr int kDefaultDegree = 6;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

using cplx = std::complex<double>;

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() : Jet(Point{}, 0) {}

  Jet(Point center, int degree) : center_(center), degree_(degree) {
    if (degree < 0) throw DegreeMismatch("jet degree must be non-negative");
    c_.assign(size_for(degree), T(0));
  }

  static Jet constant(Point center, int degree, T v) {
    Jet j(center, degree);
    j.c_[0] = v;
    return j;
  }
  // The coordinate function x (resp. y) expanded at `center`.
  static Jet variable_x(Point center, int degree) {
    Jet j = constant(center, degree, T(center.x));
    if (degree >= 1) j.c_[index(1, 0)] = T(1);
    return j;
  }
  static Jet variable_y(Point center, int degree) {
    Jet j = constant(center, degree, T(center.y));
    if (degree >= 1) j.c_[index(0, 1)] = T(1);
    return j;
  }

  static constexpr std::size_t size_for(int degree) {
    return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
  }
  static constexpr std::size_t index(int i, int j) {
    const int n = i + j;
    return static_cast<std::size_t>(n * (n + 1) / 2 + j);
  }

  int degree() const { return degree_; }
  Point center() const { return center_; }
  const std::vector<T>& data() const { return c_; }

  const T& coeff(int i, int j) const {
    check_index(i, j);
    return c_[index(i, j)];
  }
  T& coeff(int i, int j) {
    check_index(i, j);
    return c_[index(i, j)];
  }
  T value() const { return c_[0]; }

  // Partial derivative d^{i+j}f/dx^i dy^j at the center.
  T derivative(int i, int j) const {
    return coeff(i, j) * T(factorial(i) * factorial(j));
  }

  // d/dx and d/dy lose one order of accuracy.
  Jet dx() const {
    if (degree_ == 0) throw DegreeMismatch("cannot differentiate a degree-0 jet");
    Jet r(center_, degree_ - 1);
    for (int n = 0; n < degree_; ++n)
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        r.c_[index(i, j)] = T(i + 1) * c_[index(i + 1, j)];
      }
    return r;
  }
  Jet dy() const {
    if (degree_ == 0) throw DegreeMismatch("cannot differentiate a degree-0 jet");
    Jet r(center_, degree_ - 1);
    for (int n = 0; n < degree_; ++n)
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        r.c_[index(i, j)] = T(j + 1) * c_[index(i, j + 1)];
      }
    return r;
  }

  Jet truncated(int degree) const {
    if (degree > degree_)
      throw DegreeMismatch("cannot raise jet degree from " + std::to_string(degree_) +
                           " to " + std::to_string(degree));
    Jet r(center_, degree);
    std::copy_n(c_.begin(), r.c_.size(), r.c_.begin());
    return r;
  }

  double max_abs() const {
    double m = 0.0;
    for (const T& v : c_) m = std::max(m, static_cast<double>(std::abs(v)));
    return m;
  }

  Jet operator-() const {
    Jet r = *this;
    for (T& v : r.c_) v = -v;
    return r;
  }

  Jet& operator+=(const Jet& b) {
    check_compatible(b);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += b.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& b) {
    check_compatible(b);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= b.c_[k];
    return *this;
  }
  Jet& operator*=(const Jet& b) { return *this = *this * b; }
  Jet& operator/=(const Jet& b) { return *this = *this / b; }

  Jet& operator+=(T s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(T s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(T s) {
    for (T& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(T s) {
    if (s == T(0)) throw DivisionByZeroJet("division of a jet by scalar zero");
    for (T& v : c_) v /= s;
    return *this;
  }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    const int D = a.degree_;
    Jet r(a.center_, D);
    for (int n1 = 0; n1 <= D; ++n1)
      for (int j1 = 0; j1 <= n1; ++j1) {
        const T av = a.c_[index(n1 - j1, j1)];
        if (av == T(0)) continue;
        for (int n2 = 0; n1 + n2 <= D; ++n2)
          for (int j2 = 0; j2 <= n2; ++j2)
            r.c_[index(n1 - j1 + n2 - j2, j1 + j2)] += av * b.c_[index(n2 - j2, j2)];
      }
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    const T b00 = b.c_[0];
    if (!(std::abs(b00) > 1e-13 * b.max_abs()))
      throw DivisionByZeroJet("jet divisor has vanishing value coefficient");
    const int D = a.degree_;
    Jet r(a.center_, D);
    // Solve (r * b)_{ij} = a_{ij} in order of increasing total degree.
    for (int n = 0; n <= D; ++n)
      for (int j = 0; j <= n; ++j) {
        const int i = n - j;
        T s = a.c_[index(i, j)];
        for (int k = 0; k <= i; ++k)
          for (int l = 0; l <= j; ++l) {
            if (k == 0 && l == 0) continue;
            s -= b.c_[index(k, l)] * r.c_[index(i - k, j - l)];
          }
        r.c_[index(i, j)] = s / b00;
      }
    return r;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, T s) { return a += s; }
  friend Jet operator+(T s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, T s) { return a -= s; }
  friend Jet operator-(T s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, T s) { return a /= s; }
  friend Jet operator/(T s, const Jet& a) { return constant(a.center_, a.degree_, s) / a; }

 private:
  static double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  }
  void check_index(int i, int j) const {
    if (i < 0 || j < 0 || i + j > degree_)
      throw JetIndexError("jet coefficient (" + std::to_string(i) + "," + std::to_string(j) +
                          ") outside degree " + std::to_string(degree_));
  }
  void check_compatible(const Jet& b) const {
    if (degree_ != b.degree_)
      throw DegreeMismatch("jet degrees differ: " + std::to_string(degree_) + " vs " +
                           std::to_string(b.degree_));
    if (center_.x != b.center_.x || center_.y != b.center_.y)
      throw DegreeMismatch("jets expanded at different centers");
  }

  Point center_;
  int degree_ = 0;
  std::vector<T> c_;
};

using JetD = Jet<double>;
using JetC = Jet<cplx>;

// Mixed real/complex helpers.
inline JetC to_complex(const JetD& a) {
  JetC r(a.center(), a.degree());
  for (int n = 0; n <= a.degree(); ++n)
    for (int j = 0; j <= n; ++j) r.coeff(n - j, j) = a.coeff(n - j, j);
  return r;
}
inline JetD real_part(const JetC& a) {
  JetD r(a.center(), a.degree());
  for (int n = 0; n <= a.degree(); ++n)
    for (int j = 0; j <= n; ++j) r.coeff(n - j, j) = a.coeff(n - j, j).real();
  return r;
}
inline JetD imag_part(const JetC& a) {
  JetD r(a.center(), a.degree());
  for (int n = 0; n <= a.degree(); ++n)
    for (int j = 0; j <= n; ++j) r.coeff(n - j, j) = a.coeff(n - j, j).imag();
  return r;
}

// Two jets at the lower of their two degrees.
template <class T>
int common_degree(const Jet<T>& a, const Jet<T>& b) {
  return std::min(a.degree(), b.degree());
}

namespace detail {

// sum_k s[k] (a - a00)^k, truncated at a's degree.
template <class T>
Jet<T> compose(const Jet<T>& a, const std::vector<T>& s) {
  const int D = a.degree();
  Jet<T> h = a;
  h.coeff(0, 0) = T(0);
  Jet<T> r = Jet<T>::constant(a.center(), D, s[static_cast<std::size_t>(D)]);
  for (int k = D - 1; k >= 0; --k) {
    r = r * h;
    r += s[static_cast<std::size_t>(k)];
  }
  return r;
}

template <class T>
bool is_real_nonpositive(const T& v) {
  if constexpr (is_complex_v<T>) {
    return v == T(0);
  } else {
    return !(v > 0);
  }
}

// Coefficients of (a0 + t)^p.
template <class T>
std::vector<T> binomial_series(T a0, double p, int D) {
  std::vector<T> s(static_cast<std::size_t>(D) + 1);
  s[0] = std::pow(a0, p);
  for (int k = 1; k <= D; ++k)
    s[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k - 1)] * T(p - (k - 1)) / (T(k) * a0);
  return s;
}

// q = 1/d as univariate series.
template <class T>
std::vector<T> series_reciprocal(const std::vector<T>& d) {
  std::vector<T> q(d.size(), T(0));
  q[0] = T(1) / d[0];
  for (std::size_t k = 1; k < d.size(); ++k) {
    T s(0);
    for (std::size_t i = 1; i <= k; ++i) s += d[i] * q[k - i];
    q[k] = -s / d[0];
  }
  return q;
}

inline bool is_integer(double p) { return std::floor(p) == p && std::abs(p) < 1e9; }

}  // namespace detail

template <class T>
Jet<T> exp(const Jet<T>& a) {
  const int D = a.degree();
  std::vector<T> s(static_cast<std::size_t>(D) + 1);
  s[0] = std::exp(a.value());
  for (int k = 1; k <= D; ++k) s[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k - 1)] / T(k);
  return detail::compose(a, s);
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  const T a0 = a.value();
  if (detail::is_real_nonpositive(a0)) throw DomainError("log of a non-positive value");
  const int D = a.degree();
  std::vector<T> s(static_cast<std::size_t>(D) + 1);
  s[0] = std::log(a0);
  T p = T(1);
  for (int k = 1; k <= D; ++k) {
    p /= a0;
    s[static_cast<std::size_t>(k)] = (k % 2 == 1 ? T(1) : T(-1)) * p / T(k);
  }
  return detail::compose(a, s);
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
  const int D = a.degree();
  const T sv = std::sin(a.value()), cv = std::cos(a.value());
  const T cycle[4] = {sv, cv, -sv, -cv};
  std::vector<T> s(static_cast<std::size_t>(D) + 1);
  T f = T(1);
  for (int k = 0; k <= D; ++k) {
    if (k > 0) f /= T(k);
    s[static_cast<std::size_t>(k)] = cycle[k % 4] * f;
  }
  return detail::compose(a, s);
}

template <class T>
Jet<T> cos(const Jet<T>& a) {
  const int D = a.degree();
  const T sv = std::sin(a.value()), cv = std::cos(a.value());
  const T cycle[4] = {cv, -sv, -cv, sv};
  std::vector<T> s(static_cast<std::size_t>(D) + 1);
  T f = T(1);
  for (int k = 0; k <= D; ++k) {
    if (k > 0) f /= T(k);
    s[static_cast<std::size_t>(k)] = cycle[k % 4] * f;
  }
  return detail::compose(a, s);
}

template <class T>
Jet<T> tan(const Jet<T>& a) {
  if (std::abs(std::cos(a.value())) < 1e-12) throw DomainError("tan at a pole");
  const int D = a.degree();
  // t' = 1 + t^2 gives (k+1) t_{k+1} = [k == 0] + sum_i t_i t_{k-i}.
  std::vector<T> t(static_cast<std::size_t>(D) + 1);
  t[0] = std::tan(a.value());
  for (int k = 0; k < D; ++k) {
    T s = (k == 0) ? T(1) : T(0);
    for (int i = 0; i <= k; ++i) s += t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(k - i)];
    t[static_cast<std::size_t>(k + 1)] = s / T(k + 1);
  }
  return detail::compose(a, t);
}

template <class T>
Jet<T> atan(const Jet<T>& a) {
  const int D = a.degree();
  const T a0 = a.value();
  std::vector<T> d(static_cast<std::size_t>(D) + 1, T(0));
  d[0] = T(1) + a0 * a0;
  if (D >= 1) d[1] = T(2) * a0;
  if (D >= 2) d[2] = T(1);
  if (std::abs(d[0]) < 1e-14) throw DomainError("atan at a branch point");
  const std::vector<T> w = detail::series_reciprocal(d);
  std::vector<T> s(static_cast<std::size_t>(D) + 1);
  s[0] = std::atan(a0);
  for (int k = 1; k <= D; ++k) s[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k - 1)] / T(k);
  return detail::compose(a, s);
}

// a^p; non-integer p needs a positive real value (or a nonzero complex one,
// principal branch).
template <class T>
Jet<T> pow(const Jet<T>& a, double p) {
  if (detail::is_integer(p) && p >= 0) {
    Jet<T> r = Jet<T>::constant(a.center(), a.degree(), T(1));
    Jet<T> base = a;
    auto n = static_cast<long long>(p);
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n > 0) base = base * base;
    }
    return r;
  }
  const T a0 = a.value();
  if constexpr (is_complex_v<T>) {
    if (a0 == T(0)) throw DomainError("pow of zero with negative or fractional exponent");
  } else {
    if (a0 == 0.0) throw DomainError("pow of zero with negative or fractional exponent");
    if (a0 < 0.0 && !detail::is_integer(p)) throw DomainError("fractional power of a negative value");
  }
  return detail::compose(a, detail::binomial_series(a0, p, a.degree()));
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  if constexpr (!is_complex_v<T>) {
    if (!(a.value() > 0.0)) throw DomainError("sqrt of a non-positive value");
  }
  return pow(a, 0.5);
}

// |a|^p, differentiated on the branch fixed by the sign of the value.
inline JetD abs_pow(const JetD& a, double p) {
  const double a0 = a.value();
  if (a0 == 0.0) throw DomainError("abs_pow at zero");
  return a0 > 0 ? pow(a, p) : pow(-a, p);
}

// Real cube root that keeps the sign of its argument.
inline JetD cbrt(const JetD& a) {
  const double a0 = a.value();
  if (a0 == 0.0) throw DomainError("cube root at zero");
  return a0 > 0 ? pow(a, 1.0 / 3.0) : -pow(-a, 1.0 / 3.0);
}

// Evaluates a holomorphic function on the complex coordinate z = x + i y.
template <class F>
JetC holomorphic(F&& f, const JetD& x, const JetD& y) {
  const JetC z = to_complex(x) + to_complex(y) * cplx(0.0, 1.0);
  return f(z);
}

}  // namespace projlie
