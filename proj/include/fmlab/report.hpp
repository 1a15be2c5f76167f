#pragma once

#include <string>

#include <json.hpp>

namespace fmlab {

inline const char* tool_version() { return "0.1.0"; }
inline constexpr int report_schema = 1;

// Reports carry only exact integers and strings (big values in decimal); the
// canonical dump sorts keys, so equal reports are byte-identical.
inline std::string dump_report(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline nlohmann::json report_header(const std::string& command) {
  nlohmann::json j;
  j["tool"] = "fmlab";
  j["version"] = tool_version();
  j["schema"] = report_schema;
  j["command"] = command;
  return j;
}

}  // namespace fmlab
