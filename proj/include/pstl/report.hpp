#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pstl/common.hpp"

namespace pstl {

inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ull;

struct CheckRecord {
  std::string name;
  double measured = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  bool report_only = false;  // never affects the exit status
  bool passed = true;
  std::string note;
};

struct Report {
  std::string version = kVersion;
  std::uint64_t seed = kDefaultSeed;
  nlohmann::json params_echo;
  std::vector<CheckRecord> checks;
  double timing_ms = 0.0;

  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.report_only && !c.passed) return false;
    return true;
  }

  // Timing is the only nondeterministic field; callers comparing runs drop it.
  nlohmann::json to_json(bool include_timing = true) const {
    nlohmann::json out;
    out["version"] = version;
    out["seed"] = seed;
    out["params"] = params_echo;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"measured", c.measured},
                     {"reference", c.reference},
                     {"tolerance", c.tolerance},
                     {"kind", c.report_only ? "report" : "assert"},
                     {"status", c.passed ? "pass" : "fail"},
                     {"note", c.note}});
    }
    out["checks"] = arr;
    out["all_passed"] = all_passed();
    if (include_timing) out["timing"] = {{"total_ms", timing_ms}};
    return out;
  }

  std::string to_csv(bool include_timing = true) const {
    auto num = [](double v) { return nlohmann::json(v).dump(); };
    std::string s = "name,measured,reference,tolerance,kind,status,note\n";
    for (const auto& c : checks) {
      s += c.name + "," + num(c.measured) + "," + num(c.reference) + "," + num(c.tolerance) +
           "," + (c.report_only ? "report" : "assert") + "," + (c.passed ? "pass" : "fail") +
           "," + c.note + "\n";
    }
    if (include_timing) s += "timing_total_ms," + num(timing_ms) + ",,,report,pass,\n";
    return s;
  }
};

}  // namespace pstl
