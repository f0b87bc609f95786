#include <gtest/gtest.h>

#include "projlie/catalog.hpp"
#include "projlie/sampler.hpp"

using namespace projlie;

TEST(Catalog, Case3dComponents) {
  const CatalogEntry e = make_case(CaseId::T1_3d);
  for (Point p : {Point{1, 1}, Point{0.4, 1.3}, Point{1.7, 0.25}}) {
    const Eigen::Matrix2d g = e.g.matrix(p);
    EXPECT_EQ(g(0, 0), 0.0);
    EXPECT_EQ(g(1, 1), 0.0);
    // (y^2 + x) dx dy: the dx dy coefficient is 2F.
    EXPECT_DOUBLE_EQ(2 * g(0, 1), p.y * p.y + p.x);
    const Eigen::Vector2d v = e.v->value(p);
    EXPECT_DOUBLE_EQ(v(0), 2 * p.x);
    EXPECT_DOUBLE_EQ(v(1), p.y);
  }
  EXPECT_EQ(e.partners.size(), 2u);
}

TEST(Catalog, ParameterConstraints) {
  CaseParams p;
  p.nu = 1.0;
  EXPECT_THROW(make_case(CaseId::T1_1c, p), ParamConstraintViolation);
  EXPECT_THROW(make_case(CaseId::T1_2c, p), ParamConstraintViolation);
  p = {};
  p.lambda = 0;
  p.c = 1;
  EXPECT_THROW(make_case(CaseId::T1_1b, p), ParamConstraintViolation);
  p.c = -1;
  EXPECT_THROW(make_case(CaseId::T1_1b, p), ParamConstraintViolation);
  p.c = 2;
  EXPECT_NO_THROW(make_case(CaseId::T1_1b, p));
  p = {};
  p.lambda = 0;
  p.C_phase = std::numbers::pi;
  EXPECT_THROW(make_case(CaseId::T1_2b, p), ParamConstraintViolation);
  p = {};
  p.nu = 2;
  p.c = -1;
  p.epsilon = 1;
  EXPECT_THROW(make_case(CaseId::T1_1c, p), ParamConstraintViolation);
  p.nu = 4.5;
  p.c = 1;
  EXPECT_THROW(make_case(CaseId::T1_1c, p), ParamConstraintViolation);
  p = {};
  p.eta = 0.5;
  EXPECT_THROW(make_case(CaseId::T1_3c, p), ParamConstraintViolation);
  p.eta = 1.0;
  EXPECT_THROW(make_case(CaseId::T1_3c, p), ParamConstraintViolation);
  p = {};
  p.c = 0;
  EXPECT_THROW(make_case(CaseId::T1_1a, p), ParamConstraintViolation);
  p = {};
  p.y0 = 3.0;
  EXPECT_THROW(make_case(CaseId::T1_3a, p), ParamConstraintViolation);
}

TEST(Catalog, Case3cPartnerDirectEvaluation) {
  CaseParams prm;
  prm.eta = 1.0 / 3.0;
  const CatalogEntry e = make_case(CaseId::T1_3c, prm);
  const Point p{1, 2};
  // Y = y^{1/eta} = 8; partner -2 (Y + x)/y^3 dx dy + (Y + x)^2/y^4 dy^2.
  const double Y = 8, w = Y + 1;
  const Eigen::Matrix2d gb = e.partners[0].matrix(p);
  EXPECT_NEAR(gb(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(gb(0, 1), -w / 8, 1e-12);
  EXPECT_NEAR(gb(1, 1), w * w / 16, 1e-12);
}

TEST(Catalog, Case1aFormula) {
  CaseParams prm;
  prm.c = 1.7;
  const CatalogEntry e = make_case(CaseId::T1_1a, prm);
  const double x = 0.7, y = 2.3, w = 1 / x - 1 / y;
  const Eigen::Matrix2d g = e.g.matrix({x, y});
  EXPECT_NEAR(g(0, 0), w * 1.7 * std::exp(-3 * x) / x, 1e-14);
  EXPECT_NEAR(g(1, 1), w * std::exp(-3 * y) / y, 1e-14);
  EXPECT_EQ(g(0, 1), 0.0);
  // Partner (E1): (X - Y) X1/X ... in the form (1/X - 1/Y)(X1/X dx^2 + Y1/Y dy^2).
  const double wb = x - y;
  const Eigen::Matrix2d gb = e.partners[0].matrix({x, y});
  EXPECT_NEAR(gb(0, 0), wb * 1.7 * std::exp(-3 * x), 1e-14);
  EXPECT_NEAR(gb(1, 1), wb * std::exp(-3 * y), 1e-14);
}

TEST(Catalog, SamplerRespectsDomains) {
  for (CaseId id : all_cases()) {
    const CatalogEntry e = make_case(id);
    for (const Point& p : Sampler(77).points(e.domain, 100)) {
      EXPECT_TRUE(e.domain.contains(p));
      if (id == CaseId::T1_1a || id == CaseId::APP_LIOUVILLE) EXPECT_GT(std::abs(p.x - p.y), 0.0);
    }
  }
}

TEST(Catalog, SamplerIsDeterministic) {
  const CatalogEntry e = make_case(CaseId::T1_1b);
  const auto a = Sampler(5).points(e.domain, 30), b = Sampler(5).points(e.domain, 30), c = Sampler(6).points(e.domain, 30);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].x, b[i].x);
    EXPECT_EQ(a[i].y, b[i].y);
  }
  EXPECT_NE(a[0].x, c[0].x);
}

TEST(Catalog, OnlyListedCasesAreHomotheties) {
  for (CaseId id : all_cases()) {
    const CatalogEntry e = make_case(id);
    if (!e.v) continue;
    const auto pts = Sampler(19).points(e.domain, 20);
    // Best constant mu over all points for L_v g = mu g, relative residual.
    double num = 0, den = 0;
    std::vector<std::pair<Eigen::Matrix2d, Eigen::Matrix2d>> rows;
    for (const Point& p : pts) {
      const Eigen::Matrix2d L = lie_derivative_metric(e.g, *e.v, p).value(), g = e.g.matrix(p);
      const double w = 1.0 / g.norm();
      rows.emplace_back(L * w, g * w);
      num += (L * w).cwiseProduct(g * w).sum();
      den += (g * w).squaredNorm();
    }
    const double mu = num / den;
    double res = 0, size = 0;
    for (auto& [L, g] : rows) {
      res += (L - mu * g).squaredNorm();
      size += L.squaredNorm();
    }
    const double rel = std::sqrt(res / size);
    if (e.homothety_factor) {
      EXPECT_LT(rel, 1e-8) << to_string(id);
      EXPECT_NEAR(mu, *e.homothety_factor, 1e-8) << to_string(id);
    } else {
      EXPECT_GT(rel, 1e-4) << to_string(id);
    }
  }
}

TEST(Catalog, ExtraMetricTripleIsIndependent) {
  const CatalogEntry e = make_case(CaseId::T1_3d);
  for (const Point& p : Sampler(4).points(e.domain, 50)) {
    Eigen::Matrix3d m;
    int col = 0;
    for (const MetricField* h : {&e.g, &e.partners[0], &e.partners[1]}) {
      const Eigen::Matrix2d a = a_from_metric(*h, p, 0).value();
      Eigen::Vector3d v(a(0, 0), a(0, 1), a(1, 1));
      m.col(col++) = v / v.norm();
    }
    EXPECT_GT((m.transpose() * m).determinant(), 1e-8);
  }
}

TEST(Catalog, ExpectedKinds) {
  EXPECT_EQ(make_case(CaseId::T1_1a).expected_kind, LvKind::jordan_one);
  EXPECT_EQ(make_case(CaseId::T1_2a).expected_kind, LvKind::jordan_one);
  EXPECT_EQ(make_case(CaseId::T1_3a).expected_kind, LvKind::jordan_one);
  EXPECT_EQ(make_case(CaseId::T1_1b).expected_kind, LvKind::rotation);
  EXPECT_EQ(make_case(CaseId::T1_2b).expected_kind, LvKind::rotation);
  EXPECT_EQ(make_case(CaseId::T1_3b).expected_kind, LvKind::rotation);
  for (CaseId id : {CaseId::T1_1c, CaseId::T1_2c, CaseId::T1_3c, CaseId::T1_3d}) {
    const CatalogEntry e = make_case(id);
    EXPECT_EQ(e.expected_kind, LvKind::diagonal);
    EXPECT_GE(std::abs(*e.expected_lambda), 1.0);
  }
}

TEST(Catalog, CaseNamesRoundTrip) {
  for (CaseId id : all_cases()) EXPECT_EQ(case_from_string(to_string(id)), id);
  EXPECT_FALSE(case_from_string("T1_9z").has_value());
}

TEST(NormalForms, ComplexWithIdentity) {
  CaseParams d;
  d.h = "identity";
  const NormalForm nf = integrable_normal_form("complex", d);
  const Point p{0.4, 0.9};
  const Eigen::Matrix2d g = nf.g.matrix(p);
  EXPECT_NEAR(2 * g(0, 1), 2 * p.y, 1e-15);  // 2y dx dy
  EXPECT_EQ(g(0, 0), 0.0);
  const auto F = nf.F(JetD::variable_x(p, 0), JetD::variable_y(p, 0));
  EXPECT_NEAR(F[0].value(), 1.0, 1e-15);
  EXPECT_NEAR(F[1].value(), 2 * p.x / p.y, 1e-15);
  EXPECT_NEAR(F[2].value(), -1.0, 1e-15);
}

TEST(NormalForms, JordanWithZeroDataIsFlat) {
  CaseParams d;
  d.Yj = "zero";
  const CatalogEntry e = make_case(CaseId::APP_JORDAN, d);
  const Eigen::Matrix2d g = e.g.matrix({0.3, 0.8});
  EXPECT_EQ(g(0, 0), 0.0);
  EXPECT_EQ(2 * g(0, 1), 1.0);
  const auto F = (*e.integral)(JetD::variable_x({0.3, 0.8}, 0), JetD::variable_y({0.3, 0.8}, 0));
  EXPECT_EQ(F[0].value(), 1.0);
  EXPECT_EQ(F[1].value(), 0.0);
  EXPECT_EQ(F[2].value(), 0.0);
}

TEST(NormalForms, UnknownKindOrFunction) {
  EXPECT_THROW(integrable_normal_form("hyperbolic"), ParamConstraintViolation);
  CaseParams d;
  d.X = "gamma";
  EXPECT_THROW(integrable_normal_form("liouville", d), ParamConstraintViolation);
}

TEST(Catalog, UniformYGridSpansTheWindow) {
  const CatalogEntry e = make_case(CaseId::T1_3a);
  const auto ys = uniform_y_grid(e.domain, 13);
  ASSERT_EQ(ys.size(), 13u);
  EXPECT_EQ(ys.front(), 4.0);
  EXPECT_EQ(ys.back(), 10.0);
  EXPECT_NEAR(ys[1] - ys[0], 0.5, 1e-15);
  // excluded points drop out: y = 3 lies inside this box
  const Domain d{0, 1, 2, 4, [](Point p) { return std::abs(p.y - 3) < 0.3 ? std::string("near 3") : std::string{}; }};
  const auto zs = uniform_y_grid(d, 5);
  EXPECT_EQ(zs, (std::vector<double>{2.0, 2.5, 3.5, 4.0}));
}
