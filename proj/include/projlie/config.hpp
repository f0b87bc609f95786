#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "projlie/catalog.hpp"
#include "projlie/errors.hpp"

namespace projlie {

// Run configuration. Text format, one statement per line:
//
//   # comment
//   seed = 42
//   samples = 20
//   mu_grid = [-2, -1, -0.5, 0.5, 1, 2]
//   out = "report.json"
//
//   [tolerances]
//   metrizability = 1e-9
//
//   [case]
//   id = T1_1b
//   lambda = 0.4
//
// Values are numbers, bare words, double-quoted strings or bracketed number
// lists. Every [case] header opens a new case; [tolerances] may appear once.

struct CaseSpec {
  CaseId id{};
  CaseParams params;
  int line = 0;
};

struct RunConfig {
  std::vector<CaseSpec> cases;
  std::uint64_t seed = 42;
  int samples = 20;
  int geodesic_starts = 5;
  double arc_length = 0.3;
  std::vector<double> mu_grid = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
  std::map<std::string, double> tolerances;  // overrides keyed by check name
  std::optional<std::string> out;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drop a trailing comment that is not inside a quoted string.
inline std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

struct ConfigValue {
  std::string text;  // unquoted for strings
  bool quoted = false;
  bool list = false;
  int line = 0;

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + what);
  }

  double number(const std::string& key) const {
    if (quoted || list) fail(key, "expected a number");
    double v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    if (!text.empty() && *b == '+') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e || !std::isfinite(v)) fail(key, "'" + text + "' is not a finite number");
    return v;
  }

  long long integer(const std::string& key) const {
    const double v = number(key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) fail(key, "'" + text + "' is not an integer");
    return static_cast<long long>(v);
  }

  std::string word(const std::string& key) const {
    if (list) fail(key, "expected a single value");
    if (text.empty()) fail(key, "empty value");
    return text;
  }

  std::vector<double> numbers(const std::string& key) const {
    if (!list) fail(key, "expected a list [a, b, ...]");
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) fail(key, "empty list element");
      out.push_back(ConfigValue{item, false, false, line}.number(key));
    }
    return out;
  }
};

inline ConfigValue parse_value(const std::string& raw, int line) {
  ConfigValue v;
  v.line = line;
  if (raw.size() >= 2 && raw.front() == '"') {
    if (raw.back() != '"') v.fail("value", "unterminated string");
    v.text = raw.substr(1, raw.size() - 2);
    if (v.text.find('"') != std::string::npos) v.fail("value", "embedded quote");
    v.quoted = true;
  } else if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') v.fail("value", "unterminated list");
    v.text = trim(raw.substr(1, raw.size() - 2));
    v.list = true;
  } else {
    v.text = raw;
  }
  return v;
}

inline void apply_case_key(CaseSpec& c, const std::string& key, const ConfigValue& v, bool& has_id) {
  CaseParams& p = c.params;
  if (key == "id") {
    const auto id = case_from_string(v.word(key));
    if (!id) v.fail(key, "unknown case '" + v.text + "'");
    c.id = *id;
    has_id = true;
  } else if (key == "c") {
    p.c = v.number(key);
  } else if (key == "lambda") {
    p.lambda = v.number(key);
  } else if (key == "nu") {
    p.nu = v.number(key);
  } else if (key == "eta") {
    p.eta = v.number(key);
  } else if (key == "C_phase") {
    p.C_phase = v.number(key);
  } else if (key == "epsilon") {
    p.epsilon = static_cast<int>(v.integer(key));
  } else if (key == "y0") {
    p.y0 = v.number(key);
  } else if (key == "X") {
    p.X = v.word(key);
  } else if (key == "Y") {
    p.Y = v.word(key);
  } else if (key == "h") {
    p.h = v.word(key);
  } else if (key == "Yj") {
    p.Yj = v.word(key);
  } else if (key == "sign") {
    p.sign = static_cast<int>(v.integer(key));
  } else {
    v.fail(key, "unknown key in [case]");
  }
}

}  // namespace detail

// Names accepted in [tolerances]; the suite owns the defaults.
inline const std::set<std::string>& tolerance_names() {
  static const std::set<std::string> names = {
      "metrizability", "lv_fit",    "lv_normal_form", "geodesic_match", "integral_drift",
      "killing",       "classification", "prolongation", "inhomogeneous", "jordan_ode",
      "jordan_ode_exact", "bracket", "null_coordinates",        "combination",   "gram"};
  return names;
}

inline RunConfig parse_config(std::istream& in) {
  using detail::ConfigValue;
  RunConfig cfg;
  enum class Section { top, tolerances, case_block } section = Section::top;
  bool seen_tolerances = false, has_id = false;
  std::set<std::string> keys_in_section;
  std::string raw;
  int line = 0;

  auto close_case = [&] {
    if (section == Section::case_block && !has_id)
      throw ConfigError("line " + std::to_string(cfg.cases.back().line) + ": [case] without id");
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string s = detail::trim(detail::strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[' && s.find('=') == std::string::npos) {
      if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": malformed section header");
      const std::string name = detail::trim(s.substr(1, s.size() - 2));
      close_case();
      keys_in_section.clear();
      if (name == "case") {
        section = Section::case_block;
        cfg.cases.push_back(CaseSpec{});
        cfg.cases.back().line = line;
        has_id = false;
      } else if (name == "tolerances") {
        if (seen_tolerances) throw ConfigError("line " + std::to_string(line) + ": [tolerances] given twice");
        seen_tolerances = true;
        section = Section::tolerances;
      } else {
        throw ConfigError("line " + std::to_string(line) + ": unknown section [" + name + "]");
      }
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = detail::trim(s.substr(0, eq));
    const ConfigValue v = detail::parse_value(detail::trim(s.substr(eq + 1)), line);
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key");
    if (!keys_in_section.insert(key).second) v.fail(key, "duplicate key");

    switch (section) {
      case Section::top:
        if (key == "seed") {
          const long long n = v.integer(key);
          if (n < 0) v.fail(key, "seed must be non-negative");
          cfg.seed = static_cast<std::uint64_t>(n);
        } else if (key == "samples") {
          const long long n = v.integer(key);
          if (n < 6 || n > 10000) v.fail(key, "samples must lie in [6, 10000]");
          cfg.samples = static_cast<int>(n);
        } else if (key == "geodesic_starts") {
          const long long n = v.integer(key);
          if (n < 1 || n > 1000) v.fail(key, "geodesic_starts must lie in [1, 1000]");
          cfg.geodesic_starts = static_cast<int>(n);
        } else if (key == "arc_length") {
          cfg.arc_length = v.number(key);
          if (!(cfg.arc_length > 0)) v.fail(key, "arc_length must be positive");
        } else if (key == "mu_grid") {
          cfg.mu_grid = v.numbers(key);
          if (cfg.mu_grid.empty()) v.fail(key, "mu_grid is empty");
        } else if (key == "out") {
          cfg.out = v.word(key);
        } else {
          v.fail(key, "unknown key");
        }
        break;
      case Section::tolerances: {
        if (!tolerance_names().count(key)) v.fail(key, "unknown check name");
        const double t = v.number(key);
        if (!(t > 0)) v.fail(key, "tolerances must be positive");
        cfg.tolerances[key] = t;
        break;
      }
      case Section::case_block:
        detail::apply_case_key(cfg.cases.back(), key, v, has_id);
        break;
    }
  }
  close_case();
  return cfg;
}

inline RunConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

// Semantic checks that need the catalog: parameters must satisfy each case's
// constraints, and a verify run needs at least one case.
inline void validate(const RunConfig& cfg) {
  if (cfg.cases.empty()) throw ConfigError("no [case] blocks: the case list is empty");
  for (const CaseSpec& c : cfg.cases) {
    try {
      check_params(c.id, c.params);
      if (!is_projective_case(c.id)) {
        real_function(c.params.X);
        real_function(c.params.Y);
        real_function(c.params.Yj);
        complex_function(c.params.h);
      }
    } catch (const ParamConstraintViolation& e) {
      throw ConfigError("line " + std::to_string(c.line) + ": " + e.what());
    }
  }
}

}  // namespace projlie
