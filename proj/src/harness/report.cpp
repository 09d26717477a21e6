#include "procstar/harness/report.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "procstar/types.hpp"

namespace procstar::harness {

std::size_t RunReport::passed() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.value("pass", false) ? 1 : 0;
  return n;
}

std::string serialize(const RunReport& report) {
  std::string out = report.header.dump() + "\n";
  for (const auto& c : report.checks) out += c.dump() + "\n";
  return out;
}

void emit_trace(const RunReport& report, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(path + ": " + std::strerror(errno));
  file << serialize(report);
  file.flush();
  if (!file) throw Error(path + ": " + std::strerror(errno));
}

std::string summary_table(const RunReport& report) {
  std::ostringstream out;
  out << std::left << std::setw(5) << "#" << std::setw(19) << "command" << std::setw(7) << "result" << "claim\n";
  for (const auto& c : report.checks) {
    std::string claim = c.value("claim", "");
    if (claim.empty()) claim = c.value("subject", "");
    out << std::setw(5) << c.value("id", std::size_t{0}) << std::setw(19) << c.value("command", "") << std::setw(7)
        << (c.value("pass", false) ? "pass" : "FAIL") << claim << "\n";
  }
  out << report.passed() << "/" << report.checks.size() << " checks passed\n";
  return out.str();
}

}  // namespace procstar::harness
