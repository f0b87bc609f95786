#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "projlie/jet.hpp"
#include "projlie/quadrature.hpp"

using namespace projlie;

namespace {

JetD X(Point p, int D) { return JetD::variable_x(p, D); }
JetD Y(Point p, int D) { return JetD::variable_y(p, D); }

}  // namespace

TEST(Jets, PolynomialProduct) {
  const Point o{0, 0};
  const JetD r = (X(o, 2) + 1.0) * (Y(o, 2) + 1.0);
  EXPECT_EQ(r.coeff(0, 0), 1.0);
  EXPECT_EQ(r.coeff(1, 0), 1.0);
  EXPECT_EQ(r.coeff(0, 1), 1.0);
  EXPECT_EQ(r.coeff(1, 1), 1.0);
  EXPECT_EQ(r.coeff(2, 0), 0.0);
  EXPECT_EQ(r.coeff(0, 2), 0.0);
}

TEST(Jets, SelfQuotientIsOne) {
  const Point p{0.4, -0.2};
  const JetD a = exp(X(p, 5)) + Y(p, 5) * Y(p, 5) + (2.0 - std::exp(0.4) - 0.04);
  ASSERT_NEAR(a.value(), 2.0, 1e-15);
  const JetD q = a / a;
  EXPECT_NEAR(q.value(), 1.0, 1e-15);
  for (int n = 1; n <= 5; ++n)
    for (int j = 0; j <= n; ++j) EXPECT_NEAR(q.coeff(n - j, j), 0.0, 1e-14);
}

TEST(Jets, QuotientTimesDivisorRestoresDividend) {
  const Point p{0.3, 0.1};
  const JetD a = sin(X(p, 6) * Y(p, 6)) + 2.0, b = cos(X(p, 6)) + Y(p, 6);
  const JetD r = (a / b) * b;
  for (int k = 0; k < static_cast<int>(r.data().size()); ++k) EXPECT_NEAR(r.data()[k], a.data()[k], 1e-13);
}

TEST(Jets, ProductMatchesFiniteDifferences) {
  const Point p{0.3, 0.7};
  const JetD r = sin(X(p, 4)) * cos(Y(p, 4));
  auto f = [](double x, double y) { return std::sin(x) * std::cos(y); };
  for (int n = 0; n <= 4; ++n)
    for (int j = 0; j <= n; ++j) {
      const double ref = oracle::taylor_coefficient(f, p.x, p.y, n - j, j, 1e-1);
      EXPECT_NEAR(r.coeff(n - j, j), ref, 1e-6 * std::max(1.0, std::abs(ref))) << n - j << "," << j;
    }
}

TEST(Jets, ExpMaclaurin) {
  const JetD e = exp(X({0, 0}, 3));
  EXPECT_DOUBLE_EQ(e.coeff(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(e.coeff(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(e.coeff(2, 0), 0.5);
  EXPECT_DOUBLE_EQ(e.coeff(3, 0), 1.0 / 6.0);
  EXPECT_EQ(e.coeff(0, 3), 0.0);
}

TEST(Jets, SqrtSquaredIsIdentity) {
  const Point p{0.8, -0.6};
  const JetD a = X(p, 6) * X(p, 6) + exp(Y(p, 6)) * 0.3;
  const JetD r = sqrt(a) * sqrt(a);
  for (std::size_t k = 0; k < a.data().size(); ++k)
    EXPECT_NEAR(r.data()[k], a.data()[k], 1e-12 * std::max(1.0, std::abs(a.data()[k])));
}

TEST(Jets, TanMatchesFiniteDifferences) {
  const JetD t = tan(X({0.5, 0}, 5));
  auto f = [](double x, double) { return std::tan(x); };
  for (int i = 0; i <= 5; ++i) {
    const double ref = oracle::taylor_coefficient(f, 0.5, 0.0, i, 0, 0.05);
    EXPECT_NEAR(t.coeff(i, 0), ref, 1e-6 * std::max(1.0, std::abs(ref))) << i;
  }
}

TEST(Jets, ErrorsAreTyped) {
  const Point p{0, 0};
  EXPECT_THROW(X(p, 3) / X(p, 3), DivisionByZeroJet);
  EXPECT_THROW(X(p, 3) + X(p, 2), DegreeMismatch);
  EXPECT_THROW(X(p, 3) + X({1, 0}, 3), DegreeMismatch);
  EXPECT_THROW(X(p, 2).coeff(2, 1), JetIndexError);
  EXPECT_THROW(log(X(p, 2)), DomainError);
  EXPECT_THROW(log(X(p, 2) - 1.0), DomainError);
  EXPECT_THROW(sqrt(X(p, 2) - 1.0), DomainError);
  EXPECT_THROW(tan(X({std::numbers::pi / 2, 0}, 2)), DomainError);
  EXPECT_THROW(pow(X(p, 2) - 1.0, 0.5), DomainError);
}

TEST(Jets, LeibnizFirstOrderExact) {
  const Point p{0.2, 0.9};
  const JetD a = exp(X(p, 6) * Y(p, 6)), b = atan(X(p, 6) - Y(p, 6) * 2.0);
  const JetD m = a * b;
  EXPECT_EQ(m.coeff(1, 0), a.coeff(1, 0) * b.coeff(0, 0) + a.coeff(0, 0) * b.coeff(1, 0));
}

// Every elementary function on random jets against the difference oracle.
struct ElementaryCase {
  const char* name;
  std::function<JetD(const JetD&)> jet;
  std::function<double(double)> scalar;
  double lo, hi;  // range of the value coefficient
  bool allow_negative;
};

class ElementaryOracle : public ::testing::TestWithParam<int> {};

static std::vector<ElementaryCase> elementary_cases() {
  return {
      {"exp", [](const JetD& a) { return exp(a); }, [](double t) { return std::exp(t); }, -1, 1, false},
      {"log", [](const JetD& a) { return log(a); }, [](double t) { return std::log(t); }, 0.8, 2, false},
      {"sin", [](const JetD& a) { return sin(a); }, [](double t) { return std::sin(t); }, -2, 2, false},
      {"cos", [](const JetD& a) { return cos(a); }, [](double t) { return std::cos(t); }, -2, 2, false},
      {"tan", [](const JetD& a) { return tan(a); }, [](double t) { return std::tan(t); }, -0.6, 0.6, false},
      {"arctan", [](const JetD& a) { return atan(a); }, [](double t) { return std::atan(t); }, -2, 2, false},
      {"sqrt", [](const JetD& a) { return sqrt(a); }, [](double t) { return std::sqrt(t); }, 0.8, 2, false},
      {"abs_pow", [](const JetD& a) { return abs_pow(a, 1.0 / 3.0); },
       [](double t) { return std::cbrt(std::abs(t)); }, 0.8, 2, true},
  };
}

TEST_P(ElementaryOracle, RandomJetsMatchFiniteDifferences) {
  const ElementaryCase ec = elementary_cases()[static_cast<std::size_t>(GetParam())];
  std::mt19937_64 rng(1234 + GetParam());
  std::uniform_real_distribution<double> u(-1, 1);
  const int D = 6;
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Point p{u(rng), u(rng)};
    double a0 = ec.lo + (ec.hi - ec.lo) * 0.5 * (u(rng) + 1);
    if (ec.allow_negative && trial % 2) a0 = -a0;
    const double ax = 0.25 * u(rng), ay = 0.25 * u(rng), axy = 0.1 * u(rng), ayy = 0.1 * u(rng);
    const JetD dx = X(p, D) - p.x, dy = Y(p, D) - p.y;
    const JetD a = dx * ax + dy * ay + dx * dy * axy + dy * dy * ayy + a0;
    const JetD r = ec.jet(a);
    auto f = [&](double x, double y) {
      const double sx = x - p.x, sy = y - p.y;
      return ec.scalar(a0 + ax * sx + ay * sy + axy * sx * sy + ayy * sy * sy);
    };
    for (int n = 0; n <= D; ++n)
      for (int j = 0; j <= n; ++j) {
        const double ref = oracle::taylor_coefficient(f, p.x, p.y, n - j, j, 0.1);
        const double err = std::abs(r.coeff(n - j, j) - ref) / std::max(1.0, std::abs(ref));
        worst = std::max(worst, err);
      }
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
  EXPECT_LT(worst, 1e-5) << ec.name;
}

INSTANTIATE_TEST_SUITE_P(AllFunctions, ElementaryOracle, ::testing::Range(0, 8));

TEST(Jets, TruncationConsistency) {
  const Point p{0.3, -0.4};
  auto build = [&](int D) {
    const JetD x = X(p, D), y = Y(p, D);
    return atan(exp(x) * sin(y) / (cos(x * y) + 2.0)) + sqrt(x * x + 1.0) * tan(y);
  };
  const JetD hi = build(6).truncated(5), lo = build(5);
  for (std::size_t k = 0; k < lo.data().size(); ++k) EXPECT_EQ(hi.data()[k], lo.data()[k]);
}

TEST(Jets, ComplexCoordinateGivesCauchyRiemannParts) {
  const Point p{0.4, 0.3};
  const JetD x = X(p, 4), y = Y(p, 4);
  const JetC h = holomorphic([](const JetC& z) { return exp(z); }, x, y);
  const JetD re = real_part(h), im = imag_part(h);
  EXPECT_NEAR(re.value(), std::exp(0.4) * std::cos(0.3), 1e-15);
  EXPECT_NEAR(im.value(), std::exp(0.4) * std::sin(0.3), 1e-15);
  // u_x = v_y, u_y = -v_x at every order available.
  const JetD ux = re.dx(), uy = re.dy(), vx = im.dx(), vy = im.dy();
  for (std::size_t k = 0; k < ux.data().size(); ++k) {
    EXPECT_NEAR(ux.data()[k], vy.data()[k], 1e-14);
    EXPECT_NEAR(uy.data()[k], -vx.data()[k], 1e-14);
  }
}

TEST(Jets, DerivativeScalesByFactorials) {
  const JetD e = exp(X({0, 0}, 4) * 2.0);
  EXPECT_NEAR(e.derivative(3, 0), 8.0, 1e-13);
  EXPECT_NEAR(e.dx().dx().value(), 4.0, 1e-13);
}

TEST(Quadrature, ConstantIntegrand) {
  QuadratureJet q([](const JetD& t) { return t * 0.0 + 1.0; }, 0.0);
  const JetD r = q(JetD::variable_y({0, 2}, 3));
  EXPECT_NEAR(r.value(), 2.0, 1e-14);
  EXPECT_NEAR(r.coeff(0, 1), 1.0, 1e-14);
  EXPECT_EQ(r.coeff(0, 2), 0.0);
}

TEST(Quadrature, ExponentialIntegrand) {
  QuadratureJet q([](const JetD& t) { return exp(t); }, 0.0);
  const JetD r = q(JetD::variable_y({0, 1}, 3));
  EXPECT_NEAR(r.value(), std::exp(1.0) - 1.0, 1e-12);
  EXPECT_NEAR(r.coeff(0, 1), std::exp(1.0), 1e-14);
  EXPECT_NEAR(r.coeff(0, 2), std::exp(1.0) / 2, 1e-14);
}

TEST(Quadrature, SingularIntegrandMatchesSimpson) {
  auto scalar = [](double t) { return std::exp(1.5 / t) * std::sqrt(std::abs(t)) / ((t - 3) * (t - 3)); };
  QuadratureJet q([](const JetD& t) { return exp(1.5 / t) * abs_pow(t, 0.5) / ((t - 3.0) * (t - 3.0)); }, 5.0,
                  1e-13, {0.0, 3.0});
  const double ref = oracle::simpson(scalar, 5.0, 7.0, 200000);
  EXPECT_NEAR(q.value(7.0), ref, 1e-10);
  EXPECT_THROW(q.value(2.0), SingularPath);
}

TEST(Quadrature, AntiderivativeDerivativeIsIntegrand) {
  auto f = [](const JetD& t) { return sin(t) * exp(t * 0.3); };
  QuadratureJet q(f, -1.0);
  const JetD y = JetD::variable_y({0.0, 0.8}, 6);
  const JetD F = q(y);
  const JetD fy = f(y.truncated(5));
  const JetD Fy = F.dy();
  for (std::size_t k = 0; k < Fy.data().size(); ++k) EXPECT_NEAR(Fy.data()[k], fy.data()[k], 1e-14);
}

TEST(Quadrature, NonconvergenceIsReported) {
  auto wild = [](double t) { return std::sin(1.0 / t) / t; };
  EXPECT_THROW(integrate(wild, 1e-9, 1.0, 1e-15, 50), QuadratureNonconvergence);
}
