#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "projlie/errors.hpp"
#include "projlie/geometry.hpp"
#include "projlie/metrizability.hpp"

namespace projlie {

// Base point with either a velocity (tangent) or a momentum (cotangent).
struct PhasePoint {
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
  Eigen::Vector2d p = Eigen::Vector2d::Zero();
  bool cotangent = false;
};

inline PhasePoint to_cotangent(const MetricField& g, const PhasePoint& s) {
  if (s.cotangent) return s;
  return {s.q, g.matrix({s.q(0), s.q(1)}) * s.p, true};
}

inline PhasePoint to_tangent(const MetricField& g, const PhasePoint& s) {
  if (!s.cotangent) return s;
  return {s.q, g.matrix({s.q(0), s.q(1)}).inverse() * s.p, false};
}

struct TrajectorySample {
  double t = 0;
  Eigen::Vector2d q, v, acc;
  double s = 0;  // coordinate arc length from the start
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  bool exited = false;  // stopped at the domain boundary
  std::string exit_reason;
  int accepted = 0, rejected = 0;
  double energy_drift = 0;  // max |E - E0| / max(|E0|, 1e-12)
  double energy0 = 0;

  bool empty() const { return samples.size() < 2; }
  double arc_length() const { return samples.empty() ? 0.0 : samples.back().s; }
};

struct IntegratorOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  double max_coordinate_step = 0.05;  // step bound in coordinate distance
  double max_arc_length = std::numeric_limits<double>::infinity();
  int max_steps = 500000;
};

namespace detail {

using State = Eigen::Matrix<double, 5, 1>;  // x, y, vx, vy, arc length

inline Eigen::Vector2d geodesic_acceleration(const MetricField& g, const Eigen::Vector2d& q, const Eigen::Vector2d& v) {
  const Christoffel c = christoffel(g, {q(0), q(1)}, 1);
  Eigen::Vector2d a = Eigen::Vector2d::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) a(i) -= c.G[i][j][k].value() * v(j) * v(k);
  return a;
}

inline State geodesic_rhs(const MetricField& g, const State& y) {
  const Eigen::Vector2d q = y.head<2>(), v = y.segment<2>(2);
  if (!g.domain().contains({q(0), q(1)})) throw DomainExit(g.domain().why_not({q(0), q(1)}));
  const Eigen::Vector2d a = geodesic_acceleration(g, q, v);
  State d;
  d << v, a, v.norm();
  return d;
}

// Dormand-Prince 5(4) tableau.
struct DP54 {
  static constexpr double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1, 1};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static constexpr double b[7] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0};
  static constexpr double e[7] = {71.0 / 57600, 0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525,
                                  -1.0 / 40};
};

inline double energy(const MetricField& g, const Eigen::Vector2d& q, const Eigen::Vector2d& v) {
  return v.dot(g.matrix({q(0), q(1)}) * v);
}

inline Trajectory integrate_unit_speed(const MetricField& g, const PhasePoint& s0, double t_end,
                                       const IntegratorOptions& opt) {
  if (!g.domain().contains({s0.q(0), s0.q(1)}))
    throw DomainError("start point outside the domain: " + g.domain().why_not({s0.q(0), s0.q(1)}));
  Trajectory tr;
  State y;
  y << s0.q, s0.p, 0.0;
  State k[7];
  k[0] = detail::geodesic_rhs(g, y);
  tr.samples.push_back({0.0, s0.q, s0.p, k[0].segment<2>(2), 0.0});
  tr.energy0 = detail::energy(g, s0.q, s0.p);
  if (t_end == 0.0) return tr;
  const double dir = t_end > 0 ? 1.0 : -1.0;
  double t = 0.0, h = opt.initial_step, err_prev = 1e-4;
  auto cap = [&](double hh, const State& st) {
    const double speed = st.segment<2>(2).norm();
    const double m = speed > 0 ? opt.max_coordinate_step / speed : opt.max_coordinate_step;
    return std::min({hh, m, std::abs(t_end - t)});
  };
  using T = detail::DP54;
  for (int n = 0; n < opt.max_steps; ++n) {
    if (dir * (t_end - t) <= 0 || tr.samples.back().s >= opt.max_arc_length) return tr;
    h = cap(h, y);
    State yn, err;
    bool stage_failed = false;
    std::string why;
    try {
      for (int i = 1; i < 7; ++i) {
        State yi = y;
        for (int j = 0; j < i; ++j) yi += dir * h * T::a[i][j] * k[j];
        k[i] = detail::geodesic_rhs(g, yi);
      }
      yn = y;
      err.setZero();
      for (int i = 0; i < 7; ++i) {
        yn += dir * h * T::b[i] * k[i];
        err += dir * h * T::e[i] * k[i];
      }
    } catch (const Error& ex) {
      stage_failed = true;
      why = ex.what();
    }
    if (stage_failed) {
      // A stage left the domain or hit a singular point: shrink towards the boundary.
      ++tr.rejected;
      h *= 0.25;
      if (h < opt.min_step) {
        tr.exited = true;
        tr.exit_reason = why;
        return tr;
      }
      continue;
    }
    double e2 = 0;
    for (int i = 0; i < 5; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(yn(i)));
      e2 += (err(i) / sc) * (err(i) / sc);
    }
    const double en = std::max(std::sqrt(e2 / 5), 1e-16);
    if (en <= 1.0) {
      t += dir * h;
      y = yn;
      k[0] = k[6];  // first-same-as-last
      ++tr.accepted;
      const Eigen::Vector2d q = y.head<2>(), v = y.segment<2>(2);
      tr.samples.push_back({t, q, v, k[0].segment<2>(2), y(4)});
      const double E = detail::energy(g, q, v);
      tr.energy_drift = std::max(tr.energy_drift, std::abs(E - tr.energy0) / std::max(std::abs(tr.energy0), 1e-12));
      // PI step control.
      h *= std::clamp(0.9 * std::pow(en, -0.7 / 5) * std::pow(err_prev, 0.4 / 5), 0.2, 5.0);
      err_prev = en;
    } else {
      ++tr.rejected;
      h *= std::max(0.2, 0.9 * std::pow(en, -1.0 / 5));
      if (h < opt.min_step) throw StepUnderflow("step size underflow at t = " + std::to_string(t));
    }
  }
  throw StepUnderflow("maximum number of steps exceeded");
}

}  // namespace detail

// Adaptive integration of x'' + Gamma(x', x') = 0 up to parameter time t_end
// (negative for backward integration). Leaving the domain ends the
// trajectory with `exited` set; the samples up to the exit are kept.
//
// Internally the curve is integrated at unit initial coordinate speed and
// the time is rescaled afterwards, so starts xi and c*xi produce the same
// steps and hence the same curve.
inline Trajectory geodesic_integrate(const MetricField& g, const PhasePoint& start, double t_end,
                                     const IntegratorOptions& opt = {}) {
  PhasePoint s0 = to_tangent(g, start);
  const double speed = s0.p.norm();
  if (speed == 0.0 || !std::isfinite(speed)) {
    Trajectory tr;
    tr.samples.push_back({0.0, s0.q, s0.p, Eigen::Vector2d::Zero(), 0.0});
    tr.energy0 = 0;
    return tr;
  }
  s0.p /= speed;
  Trajectory tr = detail::integrate_unit_speed(g, s0, t_end * speed, opt);
  for (auto& s : tr.samples) {
    s.t /= speed;
    s.v *= speed;
    s.acc *= speed * speed;
  }
  tr.energy0 *= speed * speed;
  return tr;
}

// Cubic Hermite interpolation of position (and arc length) inside step i.
inline Eigen::Vector2d hermite_position(const TrajectorySample& a, const TrajectorySample& b, double t) {
  const double h = b.t - a.t, u = (t - a.t) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u), h01 = u * u * (3 - 2 * u),
               h11 = u * u * (u - 1);
  return h00 * a.q + h10 * h * a.v + h01 * b.q + h11 * h * b.v;
}

inline Eigen::Vector2d hermite_velocity(const TrajectorySample& a, const TrajectorySample& b, double t) {
  const double h = b.t - a.t, u = (t - a.t) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u), h01 = u * u * (3 - 2 * u),
               h11 = u * u * (u - 1);
  return h00 * a.v + h10 * h * a.acc + h01 * b.v + h11 * h * b.acc;
}

inline double hermite_arc(const TrajectorySample& a, const TrajectorySample& b, double t) {
  const double h = b.t - a.t, u = (t - a.t) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u), h01 = u * u * (3 - 2 * u),
               h11 = u * u * (u - 1);
  return h00 * a.s + h10 * h * a.v.norm() + h01 * b.s + h11 * h * b.v.norm();
}

// Position at coordinate arc length s (0 <= s <= arc_length()).
inline Eigen::Vector2d position_at_arc(const Trajectory& tr, double s) {
  if (tr.empty()) throw EmptyTrajectory("trajectory has fewer than two samples");
  const auto& S = tr.samples;
  auto it = std::lower_bound(S.begin(), S.end(), s, [](const TrajectorySample& a, double v) { return a.s < v; });
  if (it == S.begin()) return S.front().q;
  if (it == S.end()) return S.back().q;
  const TrajectorySample &a = *(it - 1), &b = *it;
  // Arc length is monotone along the step; bisect on the Hermite interpolant.
  double lo = a.t, hi = b.t;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (hermite_arc(a, b, mid) < s) lo = mid;
    else hi = mid;
  }
  const double t = 0.5 * (lo + hi);
  return hermite_position(a, b, t);
}

struct MatchResult {
  double deviation = 0;  // max coordinate distance at equal arc length
  double common_length = 0;
  int samples = 0;
};

// Two curves from the same point in the same direction, compared at equal
// coordinate arc length over their common range.
inline MatchResult unparameterized_match(const Trajectory& a, const Trajectory& b, int grid = 400) {
  if (a.empty() || b.empty()) throw EmptyTrajectory("cannot match an empty trajectory");
  MatchResult m;
  m.common_length = std::min(a.arc_length(), b.arc_length());
  m.samples = grid + 1;
  for (int i = 0; i <= grid; ++i) {
    const double s = m.common_length * i / grid;
    m.deviation = std::max(m.deviation, (position_at_arc(a, s) - position_at_arc(b, s)).norm());
  }
  return m;
}

// Momentum coefficients (a, b, c) of F = a p_x^2 + b p_x p_y + c p_y^2.
using MomentumQuadratic = std::function<std::array<JetD, 3>(const JetD& x, const JetD& y)>;

// {H, F} = sum_i dH/dp_i dF/dx_i - dH/dx_i dF/dp_i with H = g^{ij} p_i p_j / 2.
inline double poisson_bracket_residual(const MetricField& g, const MomentumQuadratic& F, const Eigen::Vector2d& q,
                                       const Eigen::Vector2d& p) {
  const Point pt{q(0), q(1)};
  const JetD x = JetD::variable_x(pt, 1), y = JetD::variable_y(pt, 1);
  const SymJet gi = inverse(g.jets(x, y));
  const auto f = F(x, y);
  const double px = p(0), py = p(1);
  auto H = [&](int i, int j) { return 0.5 * (gi.m11.coeff(i, j) * px * px + 2 * gi.m12.coeff(i, j) * px * py +
                                             gi.m22.coeff(i, j) * py * py); };
  auto Fv = [&](int i, int j) { return f[0].coeff(i, j) * px * px + f[1].coeff(i, j) * px * py + f[2].coeff(i, j) * py * py; };
  const double Hpx = gi.m11.value() * px + gi.m12.value() * py, Hpy = gi.m12.value() * px + gi.m22.value() * py;
  const double Fpx = 2 * f[0].value() * px + f[1].value() * py, Fpy = f[1].value() * px + 2 * f[2].value() * py;
  return (Hpx * Fv(1, 0) + Hpy * Fv(0, 1)) - (H(1, 0) * Fpx + H(0, 1) * Fpy);
}

// F = H written as a momentum quadratic.
inline MomentumQuadratic hamiltonian_of(const MetricField& g) {
  return [g](const JetD& x, const JetD& y) {
    const SymJet gi = inverse(g.jets(x, y));
    return std::array<JetD, 3>{gi.m11 * 0.5, gi.m12, gi.m22 * 0.5};
  };
}

struct ConservationResult {
  double max_relative_drift = 0;
  double max_absolute_drift = 0;
  double initial = 0;
};

// Drift of I(xi) = det(g)^{2/3} a(xi, xi) along a geodesic of g, with a the
// weighted tensor of h.
inline ConservationResult conservation_check(const MetricField& g, const MetricField& h, const Trajectory& tr) {
  if (tr.samples.empty()) throw EmptyTrajectory("no samples");
  ConservationResult r;
  bool first = true;
  for (const auto& s : tr.samples) {
    const Point pt{s.q(0), s.q(1)};
    const double I = quadratic_integral(g.matrix(pt), a_from_metric(h, pt, 0).value(), s.v);
    if (first) {
      r.initial = I;
      first = false;
    }
    r.max_absolute_drift = std::max(r.max_absolute_drift, std::abs(I - r.initial));
  }
  r.max_relative_drift = r.max_absolute_drift / std::max(std::abs(r.initial), 1e-12);
  return r;
}

// CSV: t, x, y, p1, p2 (momenta), then one column per integral.
struct NamedIntegral {
  std::string name;
  MetricField partner;
};

inline void write_trajectory_csv(std::ostream& out, const MetricField& g, const Trajectory& tr,
                                 const std::vector<NamedIntegral>& integrals) {
  out << "t,x,y,p1,p2";
  for (const auto& I : integrals) out << ",I_" << I.name;
  out << "\n";
  out.precision(17);
  for (const auto& s : tr.samples) {
    const Point pt{s.q(0), s.q(1)};
    const Eigen::Matrix2d gm = g.matrix(pt);
    const Eigen::Vector2d p = gm * s.v;
    out << s.t << "," << s.q(0) << "," << s.q(1) << "," << p(0) << "," << p(1);
    for (const auto& I : integrals) out << "," << quadratic_integral(gm, a_from_metric(I.partner, pt, 0).value(), s.v);
    out << "\n";
  }
  if (tr.exited) out << "# domain exit: " << tr.exit_reason << "\n";
  out << "# accepted_steps=" << tr.accepted << " rejected_steps=" << tr.rejected << " energy_drift=" << tr.energy_drift
      << "\n";
}

}  // namespace projlie
