#pragma once

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "projlie/geometry.hpp"

namespace projlie {

inline constexpr int kReportSchemaVersion = 1;

// How a check's statistic is compared with its threshold.
enum class Bound { upper, lower, equal };

inline std::string to_string(Bound b) {
  switch (b) {
    case Bound::upper: return "<";
    case Bound::lower: return ">";
    case Bound::equal: return "==";
  }
  return "?";
}

struct CheckRecord {
  std::string check;    // tolerance key, e.g. "metrizability"
  std::string anchor;   // the statement of the theory the check witnesses
  std::string subject;  // case id plus what was checked inside it
  int samples = 0;
  double value = 0;  // worst statistic over the samples
  double threshold = 0;
  Bound bound = Bound::upper;
  bool pass = false;
  std::optional<Point> worst_point;
  std::string note;
};

// Pass/fail of a statistic against a threshold; NaN never passes.
inline bool compare(double value, Bound b, double threshold) {
  if (std::isnan(value)) return false;
  switch (b) {
    case Bound::upper: return value < threshold;
    case Bound::lower: return value > threshold;
    case Bound::equal: return value == threshold;
  }
  return false;
}

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;

  int passed() const {
    int n = 0;
    for (const auto& r : records) n += r.pass ? 1 : 0;
    return n;
  }
  int failed() const { return static_cast<int>(records.size()) - passed(); }
  bool all_pass() const { return failed() == 0; }
};

namespace detail {

// JSON has no infinities; write them as strings so the record stays readable.
inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace detail

inline nlohmann::json to_json(const CheckRecord& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["anchor"] = r.anchor;
  j["subject"] = r.subject;
  j["samples"] = r.samples;
  j["value"] = detail::json_number(r.value);
  j["threshold"] = detail::json_number(r.threshold);
  j["bound"] = to_string(r.bound);
  j["pass"] = r.pass;
  j["worst_point"] = r.worst_point ? nlohmann::json::array({r.worst_point->x, r.worst_point->y}) : nlohmann::json();
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline nlohmann::json to_json(const VerificationReport& rep) {
  nlohmann::json j;
  j["schema_version"] = kReportSchemaVersion;
  j["seed"] = rep.seed;
  j["records"] = nlohmann::json::array();
  for (const auto& r : rep.records) j["records"].push_back(to_json(r));
  j["summary"] = {{"total", rep.records.size()}, {"passed", rep.passed()}, {"failed", rep.failed()}};
  return j;
}

inline std::string format_value(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << std::scientific << v;
  return s.str();
}

inline void write_text(std::ostream& out, const VerificationReport& rep) {
  for (const auto& r : rep.records) {
    out << (r.pass ? "PASS " : "FAIL ") << r.subject << "  " << r.check << "  " << format_value(r.value) << ' '
        << to_string(r.bound) << ' ' << format_value(r.threshold) << "  (" << r.samples << " samples)";
    if (!r.pass && r.worst_point)
      out << "  worst at (" << r.worst_point->x << ", " << r.worst_point->y << ")";
    if (!r.note.empty()) out << "  " << r.note;
    out << '\n';
  }
  out << rep.passed() << " passed, " << rep.failed() << " failed\n";
}

}  // namespace projlie
