#include "procstar/harness/spec_file.hpp"

#include <fstream>
#include <numbers>
#include <sstream>

#include "procstar/generators.hpp"
#include "procstar/unitary.hpp"

namespace procstar::harness {

using nlohmann::json;

namespace {

template <typename Map>
const typename Map::mapped_type& lookup(const Map& map, const std::string& name, const char* kind) {
  const auto it = map.find(name);
  if (it == map.end()) throw ConfigError("unknown " + std::string(kind) + " '" + name + "'");
  return it->second;
}

const json& require(const json& object, const char* key, const std::string& where) {
  if (!object.is_object() || !object.contains(key)) {
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  return object.at(key);
}

std::string require_string(const json& object, const char* key, const std::string& where) {
  const json& value = require(object, key, where);
  if (!value.is_string()) throw ConfigError(where + ": field '" + key + "' must be a string");
  return value.get<std::string>();
}

std::size_t as_count(const json& value, const std::string& where) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw ConfigError(where + ": expected a nonnegative integer");
  }
  return value.get<std::size_t>();
}

std::optional<Level> optional_depth(const json& object, const std::string& where) {
  if (!object.contains("depth")) return std::nullopt;
  const std::size_t depth = as_count(object.at("depth"), where + ".depth");
  if (depth == 0) throw ConfigError(where + ": depth must be at least 1");
  return depth;
}

std::vector<std::size_t> parse_sizes(const json& value, const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array of block sizes");
  std::vector<std::size_t> sizes;
  for (const auto& v : value) {
    const std::size_t n = as_count(v, where);
    if (n == 0) throw ConfigError(where + ": block sizes must be positive");
    sizes.push_back(n);
  }
  return sizes;
}

BlockMap::Assignment parse_assignment(const json& value, const std::string& where) {
  if (value.is_null()) return {};
  BlockMap::Assignment a;
  if (value.is_number_integer()) {
    a.source = as_count(value, where);
    return a;
  }
  a.source = as_count(require(value, "source", where), where + ".source");
  if (value.contains("conjugator")) a.conjugator = parse_matrix(value.at("conjugator"), where + ".conjugator");
  return a;
}

std::vector<BlockMap::Assignment> parse_assignments(const json& value, const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array of block assignments");
  std::vector<BlockMap::Assignment> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(parse_assignment(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Tower parse_tower(const json& t, const std::string& name) {
  const std::string where = "tower '" + name + "'";
  if (t.contains("rule")) {
    const std::string rule = require_string(t, "rule", where);
    const auto depth = optional_depth(t, where);
    if (rule == "product_matrix") return matrix_product_tower(depth).with_name(name);
    if (rule == "constant_commutative") return commutative_product_tower(depth).with_name(name);
    if (rule == "custom_table") {
      const auto table = parse_sizes(require(t, "block_sizes", where), where + ".block_sizes");
      if (table.empty()) throw ConfigError(where + ": block_sizes is empty");
      return make_product_tower([table](Level k) { return table[k - 1]; }, table.size()).with_name(name);
    }
    throw ConfigError(where + ": unknown rule '" + rule + "'");
  }
  const json& levels = require(t, "levels", where);
  if (!levels.is_array() || levels.empty()) throw ConfigError(where + ": levels must be a nonempty array");
  std::vector<BlockAlgebra> algebras;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    algebras.emplace_back(parse_sizes(levels[i], where + ".levels[" + std::to_string(i) + "]"));
  }
  const json maps = t.value("maps", json::array());
  if (maps.size() + 1 != algebras.size()) {
    throw ConfigError(where + ": " + std::to_string(algebras.size()) + " levels need " +
                      std::to_string(algebras.size() - 1) + " maps");
  }
  std::vector<BlockMap> block_maps;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string here = where + ".maps[" + std::to_string(i) + "]";
    block_maps.emplace_back(algebras[i + 1], algebras[i], parse_assignments(maps[i], here));
  }
  return Tower::from_levels(std::move(algebras), std::move(block_maps), name);
}

std::vector<Matrix> parse_blocks(const json& value, const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array of blocks");
  std::vector<Matrix> blocks;
  for (std::size_t j = 0; j < value.size(); ++j) {
    blocks.push_back(parse_matrix(value[j], where + "[" + std::to_string(j) + "]"));
  }
  return blocks;
}

AlgebraElement parse_level(const Tower& tower, Level p, const json& value, const std::string& where) {
  const BlockAlgebra algebra = tower.level(p);
  auto blocks = parse_blocks(value, where);
  if (blocks.size() != algebra.block_count()) {
    throw ConfigError(where + ": " + std::to_string(blocks.size()) + " blocks given, level " + std::to_string(p) +
                      " of tower '" + tower.name() + "' has " + std::to_string(algebra.block_count()));
  }
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto n = static_cast<Eigen::Index>(algebra.block_size(j));
    if (blocks[j].rows() != n || blocks[j].cols() != n) {
      throw ConfigError(where + ": block " + std::to_string(j) + " must be " + std::to_string(n) + "x" +
                        std::to_string(n));
    }
  }
  return AlgebraElement(algebra, std::move(blocks));
}

CoherentElement parse_element(const json& e, const SpecFile& spec, const std::string& name) {
  const std::string where = "element '" + name + "'";
  const Tower& tower = spec.tower(require_string(e, "tower", where));
  CoherentElement out = [&]() {
    if (e.contains("generator")) {
      const json& g = e.at("generator");
      if (g.is_string()) {
        const auto kind = g.get<std::string>();
        if (kind == "L_superdiagonal") return superdiagonal_element(tower);
        if (kind == "identity") return CoherentElement::scalar(tower, 1.0);
        if (kind == "zero") return CoherentElement::zero(tower);
        throw ConfigError(where + ": unknown generator '" + kind + "'");
      }
      if (g.contains("scalar")) return CoherentElement::scalar(tower, parse_complex(g.at("scalar"), where + ".scalar"));
      if (g.contains("diag_sequence")) {
        std::vector<Complex> values;
        const json& table = g.at("diag_sequence");
        if (!table.is_array()) throw ConfigError(where + ": diag_sequence must be an array");
        for (const auto& v : table) values.push_back(parse_complex(v, where + ".diag_sequence"));
        return diagonal_sequence(tower, std::move(values));
      }
      if (g.contains("exp_of")) {
        const CoherentElement& a = spec.element(g.at("exp_of").get<std::string>());
        if (!a.tower().same_as(tower)) throw ConfigError(where + ": exp_of refers to an element of another tower");
        return exp_selfadjoint(a, g.value("t", 1.0), g.value("horizon", Level{16}));
      }
      throw ConfigError(where + ": unknown generator " + g.dump());
    }
    if (e.contains("top")) {
      const json& top = e.at("top");
      const Level level = as_count(require(top, "level", where + ".top"), where + ".top.level");
      if (level == 0) throw ConfigError(where + ": top level must be at least 1");
      return CoherentElement::from_top(tower, level,
                                       parse_level(tower, level, require(top, "blocks", where), where + ".top.blocks"));
    }
    const json& levels = require(e, "levels", where);
    if (!levels.is_array() || levels.empty()) throw ConfigError(where + ": levels must be a nonempty array");
    std::vector<AlgebraElement> parsed;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      parsed.push_back(parse_level(tower, i + 1, levels[i], where + ".levels[" + std::to_string(i) + "]"));
    }
    auto element = CoherentElement::from_levels(tower, std::move(parsed));
    if (levels.size() > 1 && !check_coherence(element, levels.size()).pass) throw ConfigError(where + ": levels are not coherent");
    return element;
  }();
  if (e.value("selfadjoint", false)) {
    ElementProperties props = out.properties();
    props.selfadjoint = true;
    props.normal = true;
    out = out.with_properties(props);
  }
  return out.with_label(name);
}

TowerHomomorphism parse_homomorphism(const json& h, const SpecFile& spec, const std::string& name) {
  const std::string where = "homomorphism '" + name + "'";
  if (h.contains("rule")) {
    const std::string rule = require_string(h, "rule", where);
    if (rule == "identity") return TowerHomomorphism::identity(spec.tower(require_string(h, "tower", where)));
    if (rule == "zero") {
      return TowerHomomorphism::zero(spec.tower(require_string(h, "source", where)),
                                     spec.tower(require_string(h, "target", where)));
    }
    throw ConfigError(where + ": unknown rule '" + rule + "'");
  }
  const Tower& source = spec.tower(require_string(h, "source", where));
  const Tower& target = spec.tower(require_string(h, "target", where));
  const json& levels = require(h, "levels", where);
  if (!levels.is_array() || levels.empty()) throw ConfigError(where + ": levels must be a nonempty array");
  std::vector<BlockMap> maps;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string here = where + ".levels[" + std::to_string(i) + "]";
    maps.emplace_back(source.level(i + 1), target.level(i + 1), parse_assignments(levels[i], here));
  }
  // Past the listed levels the last map repeats, which fits towers that are constant there.
  return TowerHomomorphism(
      source, target, [maps](Level q) { return maps[std::min(q, maps.size()) - 1]; }, name);
}

CoveredSpace parse_space(const json& s, const std::string& name) {
  const std::string where = "space '" + name + "'";
  if (s.value("rule", "") == "initial_segments") return CoveredSpace::initial_segments(optional_depth(s, where));
  const json& points = require(s, "points", where);
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  for (const auto& p : points) {
    if (!p.is_string()) throw ConfigError(where + ": point names must be strings");
    if (!index.emplace(p.get<std::string>(), names.size()).second) {
      throw ConfigError(where + ": duplicate point '" + p.get<std::string>() + "'");
    }
    names.push_back(p.get<std::string>());
  }
  std::vector<std::vector<std::size_t>> chain;
  for (const auto& member : require(s, "chain", where)) {
    std::vector<std::size_t> ids;
    for (const auto& p : member) {
      const auto it = index.find(p.is_string() ? p.get<std::string>() : p.dump());
      if (it == index.end()) throw ConfigError(where + ": chain names unknown point " + p.dump());
      ids.push_back(it->second);
    }
    chain.push_back(std::move(ids));
  }
  try {
    return CoveredSpace(std::move(names), std::move(chain));
  } catch (const StructuralError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

std::pair<std::size_t, std::size_t> line_and_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

template <typename Parse>
void parse_section(const json& root, const char* section, Parse parse) {
  if (!root.contains(section)) return;
  const json& entries = root.at(section);
  if (!entries.is_array()) throw ConfigError(std::string("section '") + section + "' must be an array");
  for (const auto& entry : entries) parse(entry, require_string(entry, "name", std::string(section) + " entry"));
}

}  // namespace

const Tower& SpecFile::tower(const std::string& name) const { return lookup(towers, name, "tower"); }
const CoherentElement& SpecFile::element(const std::string& name) const { return lookup(elements, name, "element"); }
const TowerHomomorphism& SpecFile::homomorphism(const std::string& name) const {
  return lookup(homomorphisms, name, "homomorphism");
}
const CoveredSpace& SpecFile::space(const std::string& name) const { return lookup(spaces, name, "space"); }

Complex parse_complex(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number()) {
    throw ConfigError(where + ": complex numbers are [re, im] pairs, got " + value.dump());
  }
  return {value[0].get<double>(), value[1].get<double>()};
}

Matrix parse_matrix(const json& value, const std::string& where) {
  if (!value.is_array() || value.empty()) throw ConfigError(where + ": expected a nonempty matrix");
  const auto rows = static_cast<Eigen::Index>(value.size());
  Matrix out(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = value[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw ConfigError(where + ": matrix must be square, row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index k = 0; k < rows; ++k) out(i, k) = parse_complex(row[static_cast<std::size_t>(k)], where);
  }
  return out;
}

FunctionDescriptor parse_function(const json& value, const std::string& where) {
  FunctionDescriptor f = [&]() -> FunctionDescriptor {
    if (value.is_string() && value.get<std::string>() == "identity") return Polynomial::identity();
    if (!value.is_object()) throw ConfigError(where + ": unknown function " + value.dump());
    if (value.contains("rational")) {
      const std::size_t n = as_count(value.at("rational"), where + ".rational");
      return RationalFn{static_cast<unsigned>(n)};
    }
    if (value.contains("exp_i")) return ExpI{value.at("exp_i").get<double>()};
    if (value.contains("arg")) return PrincipalArg{value.at("arg").get<double>()};
    if (value.contains("polynomial")) {
      Polynomial p;
      for (const auto& term : value.at("polynomial")) {
        p.terms.push_back({parse_complex(require(term, "coefficient", where), where),
                           static_cast<unsigned>(term.value("z", 0)), static_cast<unsigned>(term.value("conj", 0))});
      }
      return p;
    }
    if (value.contains("tabulated")) {
      const json& t = value.at("tabulated");
      Tabulated tab;
      tab.grid = require(t, "grid", where).get<std::vector<double>>();
      for (const auto& v : require(t, "values", where)) tab.values.push_back(parse_complex(v, where));
      return tab;
    }
    throw ConfigError(where + ": unknown function " + value.dump());
  }();
  try {
    validate(f);
  } catch (const PreconditionError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return f;
}

SpecFile parse_spec(const std::string& text, const std::string& path) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError(path + ": the top level must be an object");

  SpecFile spec;
  spec.path = path;
  try {
    if (root.contains("seed")) {
      if (!root.at("seed").is_number_unsigned()) throw ConfigError("seed must be a nonnegative integer");
      spec.seed = root.at("seed").get<std::uint64_t>();
    }
    parse_section(root, "towers", [&](const json& t, const std::string& name) {
      spec.towers.insert_or_assign(name, parse_tower(t, name));
    });
    parse_section(root, "elements", [&](const json& e, const std::string& name) {
      spec.elements.insert_or_assign(name, parse_element(e, spec, name));
    });
    parse_section(root, "homomorphisms", [&](const json& h, const std::string& name) {
      spec.homomorphisms.insert_or_assign(name, parse_homomorphism(h, spec, name));
    });
    parse_section(root, "spaces", [&](const json& s, const std::string& name) {
      spec.spaces.insert_or_assign(name, parse_space(s, name));
    });
    if (root.contains("runs")) {
      for (const auto& r : root.at("runs")) {
        RunDirective d;
        d.command = require_string(r, "command", "run directive");
        d.claim = r.value("claim", "");
        d.params = r;
        d.expect = r.value("expect", json::object());
        spec.runs.push_back(std::move(d));
      }
    }
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec;
}

SpecFile load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open spec file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_spec(text.str(), path);
}

}  // namespace procstar::harness
