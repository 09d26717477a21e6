#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace procstar::harness {

/// The records of one invocation: a header echoing the command and the
/// resolved configuration, then one record per check. Contains nothing that
/// varies between runs with the same inputs.
struct RunReport {
  nlohmann::json header;
  std::vector<nlohmann::json> checks;

  std::size_t passed() const;
  bool all_passed() const { return passed() == checks.size(); }
};

/// One JSON object per line, header first.
std::string serialize(const RunReport& report);

/// Writes serialize(report) to `path`; I/O failures throw with the system message.
void emit_trace(const RunReport& report, const std::string& path);

/// Fixed-width table of the checks and a pass count.
std::string summary_table(const RunReport& report);

}  // namespace procstar::harness
