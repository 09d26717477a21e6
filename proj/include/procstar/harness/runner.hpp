#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "procstar/harness/report.hpp"
#include "procstar/harness/spec_file.hpp"

namespace procstar::harness {

inline constexpr Level kDefaultHorizon = 64;
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Command-line overrides; unset fields fall back to the directive, then the
/// spec file, then the built-in defaults.
struct RunOptions {
  std::string command;
  std::optional<std::string> spec_path;
  std::optional<Level> horizon;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<double> threshold;
  std::optional<std::string> out_path;
  /// Run the command on one named object instead of the spec's directives.
  std::optional<std::string> element;
  std::optional<std::string> tower;
  std::optional<std::string> space;
};

/// Commands accepted by run().
const std::vector<std::string>& commands();

/// Path of the bundled example spec.
std::string bundled_spec_path();

/// Runs the directives of `spec` selected by the command.
RunReport execute(const SpecFile& spec, const RunOptions& options);

/// The internal consistency battery behind `selftest`.
RunReport selftest(const RunOptions& options);

/// Full command: load, execute, print the summary, write the report.
/// Returns 0 when every check passes, 1 when any fails, 2 on config errors.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace procstar::harness
