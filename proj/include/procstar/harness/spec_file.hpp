#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "procstar/functions.hpp"
#include "procstar/gelfand.hpp"
#include "procstar/homomorphism.hpp"

namespace procstar::harness {

/// Malformed or inconsistent spec files and command lines (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct RunDirective {
  std::string command;
  /// What the directive reproduces, echoed into its report record.
  std::string claim;
  nlohmann::json params;
  /// Optional expected values of result fields.
  nlohmann::json expect;
};

/// A parsed tower description file: named towers, elements, homomorphisms,
/// covered spaces and run directives.
struct SpecFile {
  std::string path;
  std::map<std::string, Tower> towers;
  std::map<std::string, CoherentElement> elements;
  std::map<std::string, TowerHomomorphism> homomorphisms;
  std::map<std::string, CoveredSpace> spaces;
  std::vector<RunDirective> runs;
  std::optional<std::uint64_t> seed;

  const Tower& tower(const std::string& name) const;
  const CoherentElement& element(const std::string& name) const;
  const TowerHomomorphism& homomorphism(const std::string& name) const;
  const CoveredSpace& space(const std::string& name) const;
};

/// `path` is only used in messages. Parse errors report line and column.
SpecFile parse_spec(const std::string& text, const std::string& path);
SpecFile load_spec(const std::string& path);

Complex parse_complex(const nlohmann::json& value, const std::string& where);
/// Row-major nested arrays of [re, im] pairs.
Matrix parse_matrix(const nlohmann::json& value, const std::string& where);
FunctionDescriptor parse_function(const nlohmann::json& value, const std::string& where);

}  // namespace procstar::harness
