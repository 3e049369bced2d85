#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iqplab/version.hpp"
#include "json.hpp"

namespace iqplab {

inline constexpr int kReportSchemaVersion = 1;

/// One pass/fail invariant inside a report.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Self-contained result record: seed plus config regenerate identical numbers.
struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<Check> checks;
  std::optional<double> runtime_ms;  // only emitted when timing is requested

  void check(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    nlohmann::json j = {{"schema_version", kReportSchemaVersion},
                        {"tool_version", kToolVersion},
                        {"experiment", experiment},
                        {"seed", seed},
                        {"config", config},
                        {"results", results},
                        {"checks", cs},
                        {"pass", pass()}};
    if (runtime_ms) j["runtime_ms"] = *runtime_ms;
    return j;
  }
};

/// Minimal CSV writer: header row then one row per record; fields are numbers or plain strings.
inline std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out.str();
}

/// Shortest decimal form that reads back to the same double.
inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace iqplab
