#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "projlie/catalog.hpp"
#include "projlie/geometry.hpp"
#include "projlie/sampler.hpp"

using namespace projlie;

namespace {

MetricField flat() {
  return MetricField("flat", [](const JetD& x, const JetD&) { return SymJet{x * 0.0 + 1.0, x * 0.0, x * 0.0 + 1.0}; },
                     Signature::riemannian, Domain{});
}

MetricField conformal(std::function<JetD(const JetD&, const JetD&)> f, std::string name) {
  return MetricField(std::move(name), [f](const JetD& x, const JetD& y) {
    const JetD s = f(x, y);
    return SymJet{s, x * 0.0, s};
  }, Signature::riemannian, Domain{});
}

// Round sphere in stereographic coordinates, Gaussian curvature 1.
MetricField sphere() {
  return conformal([](const JetD& x, const JetD& y) {
    const JetD q = x * x + y * y + 1.0;
    return 4.0 / (q * q);
  }, "sphere");
}

oracle::Metric2 sphere_scalar() {
  return [](double x, double y) {
    const double q = 1 + x * x + y * y, s = 4 / (q * q);
    return std::array<double, 3>{s, 0.0, s};
  };
}

using fixture::RandomField;
using fixture::RandomMetric;

}  // namespace

TEST(Christoffel, FlatVanishes) {
  const Christoffel c = christoffel(flat(), {0.3, 0.2}, 3);
  for (auto& a : c.G)
    for (auto& b : a)
      for (auto& j : b) EXPECT_EQ(j.max_abs(), 0.0);
}

TEST(Christoffel, ExponentialConformalMetric) {
  const MetricField g = conformal([](const JetD& x, const JetD&) { return exp(x * 2.0); }, "e2x");
  const Point p{0.4, -0.7};
  const Christoffel c = christoffel(g, p, 3);
  EXPECT_NEAR(c.G[0][0][0].value(), 1.0, 1e-14);
  EXPECT_NEAR(c.G[0][1][1].value(), -1.0, 1e-14);
  EXPECT_NEAR(c.G[1][0][1].value(), 1.0, 1e-14);
  EXPECT_NEAR(c.G[1][1][0].value(), 1.0, 1e-14);
  EXPECT_NEAR(c.G[0][0][1].value(), 0.0, 1e-14);
  EXPECT_NEAR(c.G[1][0][0].value(), 0.0, 1e-14);
  EXPECT_NEAR(c.G[1][1][1].value(), 0.0, 1e-14);
  // The same numbers from difference quotients of the scalar metric.
  auto ref = oracle::christoffel([](double x, double) {
    return std::array<double, 3>{std::exp(2 * x), 0.0, std::exp(2 * x)};
  }, p.x, p.y);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) EXPECT_NEAR(c.G[i][j][k].value(), ref[i][j][k], 1e-9);
}

TEST(Christoffel, RandomMetricsMatchDifferenceOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    RandomMetric m{{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)}};
    MetricField g("random", [m](const JetD& x, const JetD& y) {
      auto c = m(x, y);
      return SymJet{c[0], c[1], c[2]};
    }, Signature::riemannian, Domain{});
    const Point p{0.5 * u(rng), 0.5 * u(rng)};
    const Christoffel c = christoffel(g, p, 2);
    auto ref = oracle::christoffel([m](double x, double y) { return m(x, y); }, p.x, p.y);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) EXPECT_NEAR(c.G[i][j][k].value(), ref[i][j][k], 1e-9);
  }
}

TEST(Christoffel, ConstantScalingInvariance) {
  const MetricField g = make_case(CaseId::T1_1b).g;
  const Point p{0.9, -0.4};
  const SymJet gj = g.jets(p, 4);
  const Christoffel a = christoffel(gj), b = christoffel(gj * 7.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (std::size_t n = 0; n < a.G[i][j][k].data().size(); ++n)
          EXPECT_NEAR(a.G[i][j][k].data()[n], b.G[i][j][k].data()[n], 1e-12 * (1 + std::abs(a.G[i][j][k].data()[n])));
}

TEST(ProjectiveConnection, FlatVanishes) {
  const auto K = projective_connection(flat(), {0.1, 0.2}, 2);
  for (double k : K.values()) EXPECT_EQ(k, 0.0);
}

TEST(ProjectiveConnection, InvariantUnderConstantScaling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (CaseId id : all_cases()) {
    const CatalogEntry e = make_case(id);
    const Point p = Sampler(11).points(e.domain, 1)[0];
    const SymJet g = e.g.jets(p, 2);
    const auto K = projective_connection(christoffel(g)).values();
    for (int t = 0; t < 5; ++t) {
      double c = u(rng);
      if (std::abs(c) < 0.1) c = 3.0;
      const auto Kc = projective_connection(christoffel(g * c)).values();
      for (int i = 0; i < 4; ++i) EXPECT_NEAR(Kc[i], K[i], 1e-12 * (1 + std::abs(K[i]))) << to_string(id);
    }
  }
}

TEST(ProjectiveConnection, GeodesicEquationReducesToConnection) {
  // A geodesic graph y(x) of g satisfies y'' = K0 + K1 y' + K2 y'^2 + K3 y'^3.
  // Check it pointwise from the Christoffel symbols for random directions.
  const MetricField g = make_case(CaseId::T1_2b).g;
  const Point p{0.3, 0.6};
  const Christoffel c = christoffel(g, p, 1);
  const auto K = projective_connection(c).values();
  for (double s : {-1.3, 0.2, 2.5}) {
    // velocity (1, s): x'' = -G^0_jk u^j u^k, y'' = -G^1_jk u^j u^k; y''(x) = (y'' - s x'') along x' = 1.
    double ax = 0, ay = 0;
    const double u[2] = {1, s};
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        ax -= c.G[0][j][k].value() * u[j] * u[k];
        ay -= c.G[1][j][k].value() * u[j] * u[k];
      }
    EXPECT_NEAR(ay - s * ax, K[0] + K[1] * s + K[2] * s * s + K[3] * s * s * s, 1e-12);
  }
}

TEST(LieDerivative, TranslationIsKillingForFlat) {
  VectorField v([](const JetD& x, const JetD&) { return std::array<JetD, 2>{x * 0.0 + 1.0, x * 0.0}; });
  const SymJet L = lie_derivative_metric(flat(), v, {0.2, 0.3});
  EXPECT_EQ(L.m11.max_abs() + L.m12.max_abs() + L.m22.max_abs(), 0.0);
}

TEST(LieDerivative, RadialFieldIsHomothety) {
  VectorField v([](const JetD& x, const JetD& y) { return std::array<JetD, 2>{x, y}; });
  const SymJet L = lie_derivative_metric(flat(), v, {0.2, 0.3});
  EXPECT_DOUBLE_EQ(L.m11.value(), 2.0);
  EXPECT_DOUBLE_EQ(L.m12.value(), 0.0);
  EXPECT_DOUBLE_EQ(L.m22.value(), 2.0);
}

TEST(LieDerivative, RotationIsKillingForSphere) {
  VectorField v([](const JetD& x, const JetD& y) { return std::array<JetD, 2>{-y, x}; });
  const auto pts = Sampler(5).points(Domain{-2, 2, -2, 2, {}}, 50);
  for (const Point& p : pts) {
    const SymJet L = lie_derivative_metric(sphere(), v, p);
    EXPECT_LT(std::max({std::abs(L.m11.value()), std::abs(L.m12.value()), std::abs(L.m22.value())}), 1e-8);
  }
}

TEST(LieDerivative, MatchesFlowPullback) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    RandomMetric m{{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)}};
    RandomField f{{u(rng), u(rng), u(rng), u(rng)}};
    MetricField g("random", [m](const JetD& x, const JetD& y) {
      auto c = m(x, y);
      return SymJet{c[0], c[1], c[2]};
    }, Signature::riemannian, Domain{});
    VectorField v([f](const JetD& x, const JetD& y) { return f(x, y); });
    const Point p{0.5 * u(rng), 0.5 * u(rng)};
    const SymJet L = lie_derivative_metric(g, v, p);
    auto vs = [f](const Eigen::Vector2d& q) {
      auto r = f(q(0), q(1));
      return Eigen::Vector2d(r[0], r[1]);
    };
    oracle::Metric2 gs = [m](double x, double y) { return m(x, y); };
    const double eps = 1e-5;
    const Eigen::Vector2d q(p.x, p.y);
    const Eigen::Matrix2d ref = (oracle::pulled_back(gs, vs, q, eps) - oracle::pulled_back(gs, vs, q, -eps)) / (2 * eps);
    EXPECT_NEAR(L.m11.value(), ref(0, 0), 1e-6);
    EXPECT_NEAR(L.m12.value(), ref(0, 1), 1e-6);
    EXPECT_NEAR(L.m22.value(), ref(1, 1), 1e-6);
  }
}

TEST(Curvature, FlatVanishes) {
  const CurvatureInvariants c = curvature_invariants(flat(), {0.1, 0.1});
  EXPECT_EQ(c.R, 0.0);
  EXPECT_EQ(c.L, 0.0);
  EXPECT_EQ(c.Delta, 0.0);
}

TEST(Curvature, SphereMatchesBrioschi) {
  const Point p{0.3, -0.4};
  const CurvatureInvariants c = curvature_invariants(sphere(), p);
  const double K = oracle::brioschi(sphere_scalar(), p.x, p.y);
  EXPECT_NEAR(c.R, 2 * K, 1e-6);
  EXPECT_NEAR(c.R, 2.0, 1e-12);
  EXPECT_LT(c.dR.norm(), 1e-6);
}

TEST(Curvature, SphereSignAndConstancy) {
  const auto pts = Sampler(8).points(Domain{-2, 2, -2, 2, {}}, 50);
  const double R0 = curvature_invariants(sphere(), pts[0]).R;
  EXPECT_GT(R0, 0.0);  // R = 2K with K = +1 for the unit sphere
  for (const Point& p : pts) EXPECT_NEAR(curvature_invariants(sphere(), p).R, R0, 1e-8);
}

TEST(Curvature, RandomMetricsMatchBrioschi) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    RandomMetric m{{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)}};
    MetricField g("random", [m](const JetD& x, const JetD& y) {
      auto c = m(x, y);
      return SymJet{c[0], c[1], c[2]};
    }, Signature::riemannian, Domain{});
    const Point p{0.5 * u(rng), 0.5 * u(rng)};
    const double R = scalar_curvature(g.jets(p, 2)).value();
    EXPECT_NEAR(R, 2 * oracle::brioschi([m](double x, double y) { return m(x, y); }, p.x, p.y), 1e-6);
  }
}

TEST(Curvature, Case1aInvariantsMatchDifferenceOracle) {
  const MetricField g = make_case(CaseId::T1_1a).g;
  const Point p{1.0, 2.0};
  const CurvatureInvariants c = curvature_invariants(g, p);
  const double c1 = 1.0;
  oracle::Metric2 gs = [c1](double x, double y) {
    const double w = 1 / x - 1 / y;
    return std::array<double, 3>{w * c1 * std::exp(-3 * x) / x, 0.0, w * std::exp(-3 * y) / y};
  };
  // R from Brioschi, then L and the Laplacian in the form g^ij (d_ij R - G^k_ij d_k R).
  oracle::Scalar2 R = [gs](double x, double y) { return 2 * oracle::brioschi(gs, x, y, 0.02); };
  EXPECT_NEAR(c.R, R(p.x, p.y), 1e-5 * std::abs(c.R));
  const double h = 0.1;
  const double Rx = oracle::derivative(R, p.x, p.y, 1, 0, h), Ry = oracle::derivative(R, p.x, p.y, 0, 1, h);
  const double Rxx = oracle::derivative(R, p.x, p.y, 2, 0, h), Rxy = oracle::derivative(R, p.x, p.y, 1, 1, h),
               Ryy = oracle::derivative(R, p.x, p.y, 0, 2, h);
  const Eigen::Matrix2d gi = oracle::matrix(gs, p.x, p.y).inverse();
  const double L = gi(0, 0) * Rx * Rx + 2 * gi(0, 1) * Rx * Ry + gi(1, 1) * Ry * Ry;
  const auto G = oracle::christoffel(gs, p.x, p.y);
  double Delta = 0;
  const double H[2][2] = {{Rxx, Rxy}, {Rxy, Ryy}}, dR[2] = {Rx, Ry};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = H[i][j];
      for (int k = 0; k < 2; ++k) s -= G[k][i][j] * dR[k];
      Delta += gi(i, j) * s;
    }
  EXPECT_NEAR(c.dR(0), Rx, 1e-5 * c.dR.norm());
  EXPECT_NEAR(c.dR(1), Ry, 1e-5 * c.dR.norm());
  EXPECT_NEAR(c.L, L, 1e-5 * std::abs(c.L));
  EXPECT_NEAR(c.Delta, Delta, 1e-5 * std::abs(c.Delta));
}

TEST(Curvature, NeedsEnoughDerivatives) {
  EXPECT_THROW(curvature_invariants(flat().jets({0, 0}, 4)), DegreeMismatch);
}

TEST(Transport, PullbackOfFlatIsGram) {
  AffineMap m;
  m.A << 1, 2, 0, 3;
  const MetricField t = transport(flat(), m);
  const Eigen::Matrix2d g = t.matrix({0.5, 0.5});
  EXPECT_NEAR((g - m.A.transpose() * m.A).norm(), 0.0, 1e-15);
}
