#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "projlie/analysis.hpp"
#include "projlie/catalog.hpp"
#include "projlie/config.hpp"
#include "projlie/dynamics.hpp"
#include "projlie/metrizability.hpp"
#include "projlie/report.hpp"
#include "projlie/sampler.hpp"

namespace projlie::suite {

struct CheckSpec {
  const char* anchor;
  double threshold;
  Bound bound;
};

// Default thresholds and the statement each check witnesses.
inline const std::map<std::string, CheckSpec>& check_table() {
  static const std::map<std::string, CheckSpec> t = {
      {"metrizability", {"metrics of one projective class solve the linear metrizability system", 1e-9, Bound::upper}},
      {"lv_fit", {"the projective vector field acts linearly on the solutions", 1e-6, Bound::upper}},
      {"lv_normal_form", {"normal form of that linear action", 1e-6, Bound::upper}},
      {"geodesic_match", {"projectively equivalent metrics share unparametrized geodesics", 1e-6, Bound::upper}},
      {"integral_drift", {"a projectively equivalent partner yields a quadratic integral", 1e-8, Bound::upper}},
      {"killing", {"independent curvature invariants rule out Killing fields", 1e-6, Bound::lower}},
      {"classification", {"eigenstructure of g^-1 gbar fixes the normal form of the pair", 1e-8, Bound::equal}},
      {"prolongation", {"homogeneous prolongation determinant does not vanish", 1e-8, Bound::lower}},
      {"inhomogeneous", {"homogeneous part of the eigenvalue-one system is singular", 1e-8, Bound::upper}},
      {"jordan_ode", {"reduced ODE for an extra integral has no solution", 1e-6, Bound::lower}},
      {"jordan_ode_exact", {"reduced ODE for an extra integral is solved exactly", 1e-12, Bound::upper}},
      {"bracket", {"normal-form integral Poisson-commutes with the Hamiltonian", 1e-9, Bound::upper}},
      {"null_coordinates", {"integral coefficients in null coordinates satisfy a_y = c_x = 0", 1e-10, Bound::upper}},
      {"combination", {"combinations of weighted tensors stay in the projective class", 1e-9, Bound::upper}},
      {"gram", {"three metrics span a three-dimensional solution space", 1e-8, Bound::lower}},
  };
  return t;
}

struct Options {
  std::uint64_t seed = 42;
  int samples = 20;
  int geodesic_starts = 5;
  double arc_length = 0.3;
  int combinations = 10;
  std::vector<double> mu_grid = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  std::map<std::string, double> tolerances;

  static Options from(const RunConfig& c) {
    Options o;
    o.seed = c.seed;
    o.samples = c.samples;
    o.geodesic_starts = c.geodesic_starts;
    o.arc_length = c.arc_length;
    o.mu_grid = c.mu_grid;
    o.tolerances = c.tolerances;
    return o;
  }

  double tol(const std::string& check) const {
    auto it = tolerances.find(check);
    return it != tolerances.end() ? it->second : check_table().at(check).threshold;
  }
};

// Running worst value of a statistic together with where it occurred.
class Worst {
 public:
  explicit Worst(Bound b) : bound_(b), value_(b == Bound::lower ? std::numeric_limits<double>::infinity() : 0.0) {}

  void add(double v, std::optional<Point> p = std::nullopt) {
    ++n_;
    if (bound_ != Bound::lower) v = std::abs(v);
    const bool worse = std::isnan(v) || (bound_ == Bound::lower ? v < value_ : v > value_);
    if (worse && !std::isnan(value_)) {
      value_ = v;
      at_ = p;
    }
  }
  double value() const { return value_; }
  std::optional<Point> at() const { return at_; }
  int count() const { return n_; }

 private:
  Bound bound_;
  double value_;
  std::optional<Point> at_;
  int n_ = 0;
};

inline CheckRecord record(const Options& o, const std::string& check, std::string subject, const Worst& w,
                          std::string note = {}) {
  const CheckSpec& s = check_table().at(check);
  CheckRecord r;
  r.check = check;
  r.anchor = s.anchor;
  r.subject = std::move(subject);
  r.samples = w.count();
  r.value = w.value();
  r.bound = s.bound;
  r.threshold = s.bound == Bound::equal ? 0.0 : o.tol(check);
  r.pass = w.count() > 0 && compare(r.value, r.bound, r.threshold);
  r.worst_point = w.at();
  r.note = w.count() > 0 ? std::move(note) : (note.empty() ? "no admissible samples" : note);
  return r;
}

inline CheckRecord failed(const std::string& check, std::string subject, const std::string& why) {
  const CheckSpec& s = check_table().at(check);
  CheckRecord r;
  r.check = check;
  r.anchor = s.anchor;
  r.subject = std::move(subject);
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.threshold = s.threshold;
  r.bound = s.bound;
  r.pass = false;
  r.note = why;
  return r;
}

inline std::vector<MetricField> metrics_of(const CatalogEntry& e) {
  std::vector<MetricField> r{e.g};
  r.insert(r.end(), e.partners.begin(), e.partners.end());
  return r;
}

inline std::string label(const CatalogEntry& e, const std::string& what = {}) {
  return what.empty() ? to_string(e.id) : to_string(e.id) + " " + what;
}

inline bool is_liouville_family(CaseId id) { return id == CaseId::T1_1a || id == CaseId::T1_1b || id == CaseId::T1_1c; }

inline bool is_complex_family(CaseId id) { return id == CaseId::T1_2a || id == CaseId::T1_2b || id == CaseId::T1_2c; }

inline bool is_jordan_family(CaseId id) {
  return id == CaseId::T1_3a || id == CaseId::T1_3b || id == CaseId::T1_3c || id == CaseId::T1_3d;
}

inline PairKind expected_pair_kind(CaseId id) {
  if (is_liouville_family(id) || id == CaseId::APP_LIOUVILLE) return PairKind::liouville;
  if (is_complex_family(id) || id == CaseId::APP_COMPLEX) return PairKind::complex_liouville;
  return PairKind::jordan_block;
}

// --- checks ------------------------------------------------------------------

inline std::vector<CheckRecord> metrizability_checks(const CatalogEntry& e, const Options& o) {
  std::vector<CheckRecord> out;
  const auto pts = Sampler(o.seed).points(e.domain, static_cast<std::size_t>(o.samples));
  for (const MetricField& h : metrics_of(e)) {
    Worst w(Bound::upper);
    for (const Point& p : pts) w.add(metrizability_residual(e.g, h, p).max_relative(), p);
    out.push_back(record(o, "metrizability", label(e, h.name()), w, "relative residual against K(g)"));
  }
  return out;
}

// The normal form the catalog expects for the fitted matrix, or nullopt if
// only the kind is fixed.
inline std::optional<Eigen::Matrix2d> expected_lv_matrix(const CatalogEntry& e) {
  Eigen::Matrix2d m;
  switch (e.expected_kind) {
    case LvKind::jordan_one:
      m << 1, 1, 0, 1;
      return m;
    case LvKind::rotation:
      if (!e.expected_lambda) return std::nullopt;
      m << *e.expected_lambda, -1, 1, *e.expected_lambda;
      return m;
    case LvKind::diagonal:
      if (!e.expected_lambda) return std::nullopt;
      m << *e.expected_lambda, 0, 0, 1;
      return m;
    case LvKind::scalar:
      return std::nullopt;
  }
  return std::nullopt;
}

inline std::vector<CheckRecord> lv_checks(const CatalogEntry& e, const Options& o) {
  if (!e.v) return {};
  const auto pts = Sampler(o.seed).points(e.domain, static_cast<std::size_t>(std::max(o.samples, 6)));
  LvFit fit;
  try {
    fit = fit_lv_matrix({e.g, e.partners[0]}, *e.v, pts);
  } catch (const IllConditionedFit& ex) {
    return {failed("lv_fit", label(e), ex.what())};
  }
  std::vector<CheckRecord> out;
  Worst wf(Bound::upper);
  wf.add(fit.residual);
  CheckRecord fr = record(o, "lv_fit", label(e), wf, "relative least-squares residual");
  fr.samples = static_cast<int>(pts.size());
  out.push_back(fr);

  const EigenMatrix nf = normal_form(fit.M);
  Worst wn(Bound::upper);
  std::string note = "kind " + to_string(nf.kind);
  if (nf.kind != e.expected_kind) {
    wn.add(std::numeric_limits<double>::infinity());
    note += ", expected " + to_string(e.expected_kind);
  } else if (const auto want = expected_lv_matrix(e)) {
    const Eigen::Matrix2d got = basis_normalized(fit.M, nf.kind);
    wn.add((got - *want).cwiseAbs().maxCoeff());
  } else {
    wn.add(0.0);
    note += ", entries not fixed by the catalog";
  }
  CheckRecord nr = record(o, "lv_normal_form", label(e), wn, note);
  nr.samples = static_cast<int>(pts.size());
  out.push_back(nr);
  return out;
}

struct GeodesicStart {
  Point p;
  Eigen::Vector2d v;
};

inline std::vector<GeodesicStart> geodesic_starts(const CatalogEntry& e, const Options& o, int n) {
  const auto pts = Sampler(o.seed + 1).points(e.domain, static_cast<std::size_t>(n));
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  std::vector<GeodesicStart> out;
  for (const Point& p : pts) {
    const double th = ang(rng);
    out.push_back({p, Eigen::Vector2d(std::cos(th), std::sin(th))});
  }
  return out;
}

// Geodesics of g against those of each partner from the same start, and the
// partner's integral along the geodesics of g.
inline std::vector<CheckRecord> geodesic_checks(const CatalogEntry& e, const Options& o, int starts) {
  IntegratorOptions io;
  io.max_arc_length = o.arc_length;
  std::vector<CheckRecord> out;
  const auto st = geodesic_starts(e, o, starts);
  std::vector<Trajectory> base;
  for (const auto& s : st) base.push_back(geodesic_integrate(e.g, {Eigen::Vector2d(s.p.x, s.p.y), s.v, false}, 1e3, io));
  for (const MetricField& h : e.partners) {
    Worst dev(Bound::upper), drift(Bound::upper);
    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < st.size(); ++i) {
      const Trajectory other = geodesic_integrate(h, {Eigen::Vector2d(st[i].p.x, st[i].p.y), st[i].v, false}, 1e3, io);
      if (base[i].empty() || other.empty()) continue;
      const MatchResult m = unparameterized_match(base[i], other);
      shortest = std::min(shortest, m.common_length);
      dev.add(m.deviation, st[i].p);
      drift.add(conservation_check(e.g, h, base[i]).max_relative_drift, st[i].p);
    }
    out.push_back(record(o, "geodesic_match", label(e, h.name()), dev,
                         "shortest common arc " + format_value(shortest)));
    out.push_back(record(o, "integral_drift", label(e, h.name()), drift, "relative drift along geodesics of g"));
  }
  return out;
}

inline CheckRecord killing_check(const MetricField& g, const Domain& d, const Options& o, int n,
                                 const std::string& subject) {
  Worst w(Bound::lower);
  for (const Point& p : Sampler(o.seed).points(d, static_cast<std::size_t>(n))) {
    const KillingObstruction k = killing_obstruction(g, p);
    w.add(std::min(std::abs(k.det1), std::abs(k.det2)), p);
  }
  return record(o, "killing", subject, w, "min of |det1|, |det2| with unit differentials");
}

inline CheckRecord classification_check(const CatalogEntry& e, const Options& o) {
  ClassifyOptions co;
  co.disc_margin = co.nilpotent_margin = o.tol("classification");
  const PairKind want = expected_pair_kind(e.id);
  Worst w(Bound::upper);
  int mismatches = 0;
  std::optional<Point> first_bad;
  std::string seen;
  for (const Point& p : Sampler(o.seed).points(e.domain, static_cast<std::size_t>(o.samples))) {
    const PairKind k = classify_pair(e.g, e.partners[0], p, co).kind;
    if (k != want) {
      ++mismatches;
      if (!first_bad) {
        first_bad = p;
        seen = to_string(k);
      }
    }
  }
  w.add(mismatches, first_bad);
  std::string note = "points not classified " + to_string(want);
  if (mismatches) note += "; first seen as " + seen;
  CheckRecord r = record(o, "classification", label(e), w, note);
  r.samples = o.samples;
  return r;
}

inline std::vector<double> mu_free_y_grid() {
  std::vector<double> ys;
  for (int i = 0; i < 12; ++i) ys.push_back(0.2 + 0.1 * i);
  return ys;
}

// Homogeneous prolongation determinant on the y-grid, one record per mu.
inline std::vector<CheckRecord> prolongation_checks(const CatalogEntry& e, const Options& o) {
  std::vector<CheckRecord> out;
  for (double mu : o.mu_grid) {
    Worst w(Bound::lower);
    double rel = std::numeric_limits<double>::infinity();
    for (double y : mu_free_y_grid()) {
      const ProlongationRows r = prolongation_rows_homogeneous(adapted_connection(e, y, 4), mu);
      w.add(std::abs(r.det_m), Point{0.0, y});
      rel = std::min(rel, std::abs(r.det_m) / r.scale);
    }
    out.push_back(record(o, "prolongation", label(e, "mu=" + format_value(mu)), w,
                         "adapted coordinates; smallest |det|/row-norm product " + format_value(rel)));
  }
  return out;
}

inline CheckRecord inhomogeneous_check(const CatalogEntry& e, const Options& o) {
  Worst w(Bound::upper);
  for (int i = 0; i <= 15; ++i) {
    const double y = 0.5 + 0.1 * i;
    const ProlongationRows r = prolongation_rows_inhomogeneous(e.params.c, y);
    w.add(std::abs(r.det_m) / r.scale, Point{0.0, y});
  }
  return record(o, "inhomogeneous", label(e), w, "|det m| relative to the row-norm product");
}

// Y depends on y alone, so the samples are a y-grid spanning the window; the
// minimax below is decided near the window ends.
inline std::vector<CheckRecord> jordan_ode_checks(const CatalogEntry& e, const Options& o) {
  if (!e.jordan_Y) return {};
  const auto ys = uniform_y_grid(e.domain, std::clamp(o.samples, 4, 40));
  if (e.id == CaseId::T1_3d) {
    Worst w(Bound::upper);
    for (double y : ys) w.add(jordan_integral_ode_residual(jordan_Y_jet(*e.jordan_Y, y), 4.0, 0.0, 3.0, 0.0), Point{0, y});
    return {record(o, "jordan_ode_exact", label(e), w, "coefficients beta1 = alpha2 = 0, 4 beta0 = 3 alpha1")};
  }
  std::vector<std::array<double, 4>> rows;
  for (double y : ys) rows.push_back(jordan_integral_ode_row(jordan_Y_jet(*e.jordan_Y, y)));
  const OdeResponse r = jordan_integral_ode_response(rows);
  Worst w(Bound::lower);
  w.add(r.min_max_residual);
  CheckRecord rec = record(o, "jordan_ode", label(e), w,
                           "min over unit coefficient vectors of the max residual on y in [" +
                               format_value(ys.front()) + ", " + format_value(ys.back()) + "]");
  rec.samples = static_cast<int>(rows.size());
  return {rec};
}

inline std::vector<CheckRecord> integral_checks(const CatalogEntry& e, const Options& o, int n) {
  if (!e.integral) return {};
  std::vector<CheckRecord> out;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(-1, 1);
  const auto pts = Sampler(o.seed).points(e.domain, static_cast<std::size_t>(n));
  Worst wb(Bound::upper);
  for (const Point& p : pts) {
    const Eigen::Vector2d mom(u(rng), u(rng));
    wb.add(poisson_bracket_residual(e.g, *e.integral, {p.x, p.y}, mom), p);
  }
  out.push_back(record(o, "bracket", label(e), wb, "{H, F} at random momenta"));

  Worst wl(Bound::upper);
  try {
    for (const Point& p : pts) {
      const BirkhoffCheck b = birkhoff_form_check(e.g, *e.integral, p);
      wl.add(std::max(std::abs(b.a_y), std::abs(b.c_x)), p);
    }
    out.push_back(record(o, "null_coordinates", label(e), wl, "max of |a_y|, |c_x|"));
  } catch (const NotNullForm&) {
    // Only the null-coordinate forms carry this condition.
  }
  return out;
}

inline std::vector<CheckRecord> combination_checks(const CatalogEntry& e, const Options& o, int count, int n) {
  std::vector<CheckRecord> out;
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  const auto pts = Sampler(o.seed).points(e.domain, static_cast<std::size_t>(n));
  for (const MetricField& h : e.partners) {
    Worst w(Bound::upper);
    int skipped = 0;
    for (int k = 0; k < count; ++k) {
      const double alpha = u(rng), beta = u(rng);
      const MetricField c = combine_metrics({{e.g, alpha}, {h, beta}});
      for (const Point& p : pts) {
        try {
          w.add(metrizability_residual(e.g, c, p).max_relative(), p);
        } catch (const Error&) {
          ++skipped;  // the combination is degenerate at this point
        }
      }
    }
    std::string note = std::to_string(count) + " random weight pairs";
    if (skipped) note += "; " + std::to_string(skipped) + " degenerate points skipped";
    out.push_back(record(o, "combination", label(e, h.name()), w, note));
  }
  return out;
}

inline CheckRecord gram_check(const CatalogEntry& e, const Options& o, int n) {
  Worst w(Bound::lower);
  for (const Point& p : Sampler(o.seed).points(e.domain, static_cast<std::size_t>(n))) {
    Eigen::Matrix3d m;
    int col = 0;
    for (const MetricField& h : metrics_of(e)) {
      const Eigen::Matrix2d a = a_from_metric(h, p, 0).value();
      const Eigen::Vector3d v(a(0, 0), a(0, 1), a(1, 1));
      m.col(col++) = v / v.norm();
    }
    w.add((m.transpose() * m).determinant(), p);
  }
  return record(o, "gram", label(e), w, "Gram determinant of the normalized weighted tensors");
}

// Every check that applies to the case.
inline std::vector<CheckRecord> run_case(const CatalogEntry& e, const Options& o) {
  std::vector<CheckRecord> out;
  auto add = [&out](std::vector<CheckRecord> v) { out.insert(out.end(), v.begin(), v.end()); };
  add(metrizability_checks(e, o));
  add(lv_checks(e, o));
  add(geodesic_checks(e, o, o.geodesic_starts));
  if (is_liouville_family(e.id) || is_complex_family(e.id)) out.push_back(killing_check(e.g, e.domain, o, o.samples, label(e)));
  out.push_back(classification_check(e, o));
  if (is_liouville_family(e.id)) add(prolongation_checks(e, o));
  if (e.id == CaseId::T1_1a) out.push_back(inhomogeneous_check(e, o));
  add(jordan_ode_checks(e, o));
  add(integral_checks(e, o, o.samples));
  add(combination_checks(e, o, o.combinations, o.samples));
  if (e.partners.size() >= 2) out.push_back(gram_check(e, o, o.samples));
  return out;
}

inline VerificationReport run(const RunConfig& cfg) {
  validate(cfg);
  const Options o = Options::from(cfg);
  VerificationReport rep;
  rep.seed = cfg.seed;
  for (const CaseSpec& c : cfg.cases) {
    const auto recs = run_case(make_case(c.id, c.params), o);
    rep.records.insert(rep.records.end(), recs.begin(), recs.end());
  }
  return rep;
}

}  // namespace projlie::suite
