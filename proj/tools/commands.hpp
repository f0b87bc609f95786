#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "projlie/projlie.hpp"

namespace projlie::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2 };

inline std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto log = std::make_shared<spdlog::logger>("projlie", sink);
  log->set_pattern("[%l] %v");
  log->set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("PROJLIE_LOG")) {
    const auto parsed = spdlog::level::from_str(lvl);
    // from_str maps unknown names to off; only honour names it knows
    if (parsed != spdlog::level::off || std::string(lvl) == "off") log->set_level(parsed);
  }
  return log;
}

// Writes to --out when given, otherwise to the command's output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot write to '" + path + "'");
    }
    out_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

struct CaseSelection {
  std::string config;
  std::string case_id;
  std::vector<std::string> params;  // key=value, as in a [case] block
};

inline void add_case_options(CLI::App* cmd, CaseSelection& s) {
  cmd->add_option("--config", s.config, "config file (its first [case] is used)");
  cmd->add_option("--case", s.case_id, "case id, e.g. T1_1a");
  cmd->add_option("--param", s.params, "case parameter key=value (repeatable)");
}

// Resolve --config / --case / --param into a config with at least one case.
inline RunConfig resolve(const CaseSelection& s) {
  if (!s.config.empty() && !s.case_id.empty()) throw ConfigError("give either --config or --case, not both");
  if (!s.config.empty()) {
    if (!s.params.empty()) throw ConfigError("--param needs --case");
    RunConfig c = load_config(s.config);
    validate(c);
    return c;
  }
  if (s.case_id.empty()) throw ConfigError("one of --config or --case is required");
  std::string text = "[case]\nid = " + s.case_id + "\n";
  for (const std::string& kv : s.params) {
    if (kv.find('=') == std::string::npos) throw ConfigError("--param expects key=value, got '" + kv + "'");
    text += kv + "\n";
  }
  RunConfig c = parse_config_string(text);
  validate(c);
  return c;
}

// --- verify -------------------------------------------------------------------

struct VerifyArgs {
  std::string config, out;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

inline int cmd_verify(const VerifyArgs& a, std::ostream& out, spdlog::logger& log) {
  RunConfig cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  validate(cfg);
  log.info("verifying {} case(s) with seed {}", cfg.cases.size(), cfg.seed);
  const VerificationReport rep = suite::run(cfg);
  for (const auto& r : rep.records)
    if (!r.pass) log.warn("{} {}: {} ({})", r.subject, r.check, format_value(r.value), r.note);
  const std::string path = !a.out.empty() ? a.out : cfg.out.value_or("");
  Sink sink(path, out);
  if (a.json) {
    *sink << to_json(rep).dump(2) << '\n';
  } else {
    write_text(*sink, rep);
  }
  if (!path.empty()) log.info("report written to {}", path);
  return rep.all_pass() ? kOk : kCheckFailed;
}

// --- trace --------------------------------------------------------------------

struct TraceArgs {
  CaseSelection sel;
  std::vector<double> start;  // x y vx vy
  double t_end = 1.0;
  double arc = 0;
  std::string out;
};

inline MetricField flat_metric() {
  return MetricField("flat", [](const JetD& x, const JetD&) {
    return SymJet{x * 0.0 + 1.0, x * 0.0, x * 0.0 + 1.0};
  }, Signature::riemannian, Domain{-1e6, 1e6, -1e6, 1e6, {}});
}

inline int cmd_trace(const TraceArgs& a, std::ostream& out, spdlog::logger& log) {
  if (a.start.size() != 4) throw ConfigError("--start expects four numbers: x y vx vy");
  MetricField g;
  std::vector<NamedIntegral> integrals;
  if (a.sel.case_id == "flat") {
    if (!a.sel.params.empty()) throw ConfigError("the flat metric takes no parameters");
    g = flat_metric();
    integrals.push_back({"g", g});
  } else {
    const RunConfig cfg = resolve(a.sel);
    if (cfg.cases.size() > 1) log.warn("config has {} cases; tracing the first", cfg.cases.size());
    const CatalogEntry e = make_case(cfg.cases[0].id, cfg.cases[0].params);
    g = e.g;
    integrals.push_back({"g", e.g});
    integrals.push_back({"gbar", e.partners[0]});
    if (e.partners.size() > 1) integrals.push_back({"gtilde", e.partners[1]});
  }
  const Point p{a.start[0], a.start[1]};
  const std::string why = g.domain().why_not(p);
  if (!why.empty()) throw DomainError("start point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                      ") is outside the domain of " + g.name() + ": " + why);
  IntegratorOptions io;
  if (a.arc > 0) io.max_arc_length = a.arc;
  const Trajectory tr =
      geodesic_integrate(g, {Eigen::Vector2d(p.x, p.y), Eigen::Vector2d(a.start[2], a.start[3]), false}, a.t_end, io);
  log.info("{} accepted and {} rejected steps", tr.accepted, tr.rejected);
  Sink sink(a.out, out);
  write_trajectory_csv(*sink, g, tr, integrals);
  return kOk;
}

// --- classify -----------------------------------------------------------------

struct ClassifyArgs {
  CaseSelection sel;
  std::string partner = "canonical";  // canonical | extra | scaled:K
  int samples = 20;
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::string out;
};

inline MetricField partner_of(const CatalogEntry& e, const std::string& which) {
  if (which == "canonical") return e.partners[0];
  if (which == "extra") {
    if (e.partners.size() < 2) throw ConfigError(to_string(e.id) + " has no extra metric");
    return e.partners[1];
  }
  if (which.rfind("scaled:", 0) == 0) {
    double k = 0;
    try {
      k = std::stod(which.substr(7));
    } catch (const std::exception&) {
      throw ConfigError("bad scale in '" + which + "'");
    }
    if (k == 0 || !std::isfinite(k)) throw ConfigError("scale must be a nonzero number");
    const MetricField g = e.g;
    return MetricField(g.name() + "*" + which.substr(7), [g, k](const JetD& x, const JetD& y) {
      const SymJet s = g.jets(x, y);
      return SymJet{s.m11 * k, s.m12 * k, s.m22 * k};
    }, g.signature(), g.domain());
  }
  throw ConfigError("unknown partner '" + which + "' (canonical, extra or scaled:K)");
}

inline int cmd_classify(const ClassifyArgs& a, std::ostream& out, spdlog::logger& log) {
  const RunConfig cfg = resolve(a.sel);
  const std::uint64_t seed = a.seed.value_or(cfg.seed);
  nlohmann::json doc = nlohmann::json::array();
  Sink sink(a.out, out);
  if (!a.json) *sink << "case,x,y,kind,margin\n";
  for (const CaseSpec& c : cfg.cases) {
    const CatalogEntry e = make_case(c.id, c.params);
    const MetricField h = partner_of(e, a.partner);
    std::map<std::string, int> counts;
    nlohmann::json points = nlohmann::json::array(), indeterminate = nlohmann::json::array();
    for (const Point& p : Sampler(seed).points(e.domain, static_cast<std::size_t>(a.samples))) {
      const PairClass k = classify_pair(e.g, h, p);
      const std::string kind = to_string(k.kind);
      ++counts[kind];
      if (k.kind == PairKind::indeterminate) indeterminate.push_back({p.x, p.y});
      if (a.json) {
        points.push_back({{"x", p.x}, {"y", p.y}, {"kind", kind}, {"margin", k.margin}});
      } else {
        *sink << to_string(e.id) << ',' << p.x << ',' << p.y << ',' << kind << ',' << k.margin << '\n';
      }
    }
    log.info("{}: {} points classified", to_string(e.id), a.samples);
    if (a.json) {
      doc.push_back({{"case", to_string(e.id)}, {"partner", h.name()}, {"points", points}, {"counts", counts},
                     {"indeterminate", indeterminate}});
    } else {
      for (const auto& [kind, n] : counts) *sink << "# " << to_string(e.id) << ' ' << kind << ": " << n << '\n';
      for (const auto& p : indeterminate) *sink << "# indeterminate at (" << p[0] << ", " << p[1] << ")\n";
    }
  }
  if (a.json) *sink << doc.dump(2) << '\n';
  return kOk;
}

// --- sweep --------------------------------------------------------------------

struct SweepArgs {
  CaseSelection sel;
  std::vector<double> mu;
  double y_min = 0.2, y_max = 1.3, y_step = 0.1;
  std::string out;
};

inline int cmd_sweep(const SweepArgs& a, std::ostream& out, spdlog::logger& log) {
  const RunConfig cfg = resolve(a.sel);
  const std::vector<double> mus = a.mu.empty() ? cfg.mu_grid : a.mu;
  if (!(a.y_step > 0) || a.y_max < a.y_min) throw ConfigError("need y-step > 0 and y-max >= y-min");
  Sink sink(a.out, out);
  *sink << "case,mu,y,det,det_over_scale\n";
  (*sink).precision(17);
  std::vector<std::string> trailer;
  for (const CaseSpec& c : cfg.cases) {
    if (!suite::is_liouville_family(c.id))
      throw ConfigError(to_string(c.id) + ": the prolongation sweep covers cases T1_1a, T1_1b, T1_1c");
    const CatalogEntry e = make_case(c.id, c.params);
    for (double mu : mus) {
      double weakest = std::numeric_limits<double>::infinity();
      const int n = static_cast<int>(std::floor((a.y_max - a.y_min) / a.y_step + 1e-9));
      for (int i = 0; i <= n; ++i) {
        const double y = a.y_min + a.y_step * i;
        const ProlongationRows r = prolongation_rows_homogeneous(adapted_connection(e, y, 4), mu);
        *sink << to_string(e.id) << ',' << mu << ',' << y << ',' << r.det_m << ',' << r.det_m / r.scale << '\n';
        weakest = std::min(weakest, std::abs(r.det_m));
      }
      std::ostringstream t;
      t << "# " << to_string(e.id) << " mu=" << mu << " min|det|=" << format_value(weakest);
      trailer.push_back(t.str());
      log.debug("{}", t.str());
    }
  }
  for (const auto& t : trailer) *sink << t << '\n';
  return kOk;
}

// --- entry point --------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"projlie: checks for projectively equivalent metrics with projective vector fields"};
  app.require_subcommand(1);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the verification suite on the cases of a config");
  verify->add_option("--config", va.config, "config file")->required();
  verify->add_option("--seed", va.seed, "sampler seed (overrides the config)");
  verify->add_option("--out", va.out, "write the report here");
  verify->add_flag("--json", va.json, "JSON report instead of text");

  TraceArgs ta;
  auto* trace = app.add_subcommand("trace", "geodesic trajectory as CSV with integral columns");
  add_case_options(trace, ta.sel);
  trace->add_option("--start", ta.start, "x y vx vy")->required()->expected(4);
  trace->add_option("--t-end", ta.t_end, "parameter time to integrate to");
  trace->add_option("--arc", ta.arc, "stop after this coordinate arc length");
  trace->add_option("--out", ta.out, "write the CSV here");

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "pair kind of g and a partner at sample points");
  add_case_options(classify, ca.sel);
  classify->add_option("--partner", ca.partner, "canonical, extra or scaled:K");
  classify->add_option("--samples", ca.samples, "number of sample points")->check(CLI::Range(1, 100000));
  classify->add_option("--seed", ca.seed, "sampler seed");
  classify->add_flag("--json", ca.json, "JSON instead of CSV");
  classify->add_option("--out", ca.out, "write the output here");

  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "prolongation determinant over a mu-grid and a y-grid");
  add_case_options(sweep, sa.sel);
  sweep->add_option("--mu", sa.mu, "mu values (default: the config grid)");
  sweep->add_option("--y-min", sa.y_min);
  sweep->add_option("--y-max", sa.y_max);
  sweep->add_option("--y-step", sa.y_step);
  sweep->add_option("--out", sa.out, "write the CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kUsage;
  }

  auto log = make_logger(err);
  try {
    if (*verify) return cmd_verify(va, out, *log);
    if (*trace) return cmd_trace(ta, out, *log);
    if (*classify) return cmd_classify(ca, out, *log);
    return cmd_sweep(sa, out, *log);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
  } catch (const ParamConstraintViolation& e) {
    err << "parameter error: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace projlie::cli
