#include "procstar/harness/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <functional>
#include <ostream>

#include "procstar/bounded.hpp"
#include "procstar/core.hpp"
#include "procstar/gelfand.hpp"
#include "procstar/generators.hpp"
#include "procstar/unitary.hpp"

#ifndef PROCSTAR_BUNDLED_SPEC
#define PROCSTAR_BUNDLED_SPEC "data/paper_examples.json"
#endif

namespace procstar::harness {

using nlohmann::json;

namespace {

constexpr std::size_t kSelftestProbes = 200;

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json points_json(const std::vector<Complex>& points) {
  json out = json::array();
  for (Complex z : points) out.push_back(complex_json(z));
  return out;
}

json verdict_json(const BoundednessVerdict& v) {
  json out{{"status", to_string(v.status)}, {"value", v.value}, {"exact", v.exact}};
  switch (v.status) {
    case Boundedness::Bounded:
      out["M"] = v.value;
      out["certificate"] = v.certificate;
      break;
    case Boundedness::Unbounded:
      out["witness_level"] = v.level;
      out["witness_value"] = v.value;
      break;
    case Boundedness::UnknownAtTruncation:
      out["lower_bound"] = v.value;
      out["horizon"] = v.level;
      break;
  }
  return out;
}

/// Resolved parameters of one directive.
struct Config {
  Level horizon = kDefaultHorizon;
  double tol = 0.0;
  double threshold = defaults::kDivergenceThreshold;
  std::optional<std::uint64_t> seed;

  json to_json() const {
    json out{{"horizon", horizon}, {"tol", tol}, {"threshold", threshold}};
    out["seed"] = seed ? json(*seed) : json(nullptr);
    return out;
  }

  Rng rng(const std::string& command) const {
    if (!seed) throw ConfigError("command '" + command + "' is randomized and needs a seed");
    return Rng(*seed);
  }
};

double default_tol(const std::string& command) {
  if (command == "gelfand-roundtrip") return defaults::kGelfandTol;
  if (command == "unitary-log" || command == "exp-factor") return defaults::kUnitaryTol;
  if (command == "funcalc") return defaults::kNormalTol;
  return defaults::kRankTol;
}

Config resolve(const RunDirective& d, const SpecFile* spec, const RunOptions& options) {
  Config c;
  const json& p = d.params;
  c.horizon = options.horizon.value_or(p.value("horizon", kDefaultHorizon));
  c.tol = options.tol.value_or(p.value("tol", default_tol(d.command)));
  c.threshold = options.threshold.value_or(p.value("threshold", defaults::kDivergenceThreshold));
  if (options.seed) {
    c.seed = options.seed;
  } else if (p.contains("seed")) {
    c.seed = p.at("seed").get<std::uint64_t>();
  } else if (spec && spec->seed) {
    c.seed = spec->seed;
  }
  if (c.horizon == 0) throw ConfigError("horizon must be at least 1");
  if (!(c.tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(c.threshold > 0.0)) throw ConfigError("threshold must be positive");
  return c;
}

struct Outcome {
  json result = json::object();
  bool pass = true;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      failures.push_back(what);
    }
  }
};

std::string param_string(const RunDirective& d, const char* key) {
  if (!d.params.contains(key) || !d.params.at(key).is_string()) {
    throw ConfigError("'" + d.command + "' directive needs a '" + key + "' name");
  }
  return d.params.at(key).get<std::string>();
}

std::size_t param_count(const RunDirective& d, const char* key, std::size_t fallback) {
  if (!d.params.contains(key)) return fallback;
  const json& v = d.params.at(key);
  if (!v.is_number_unsigned()) throw ConfigError("'" + std::string(key) + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

std::vector<std::size_t> ideal_blocks(const RunDirective& d) {
  const json& v = d.params.at("ideal_blocks");
  if (!v.is_array()) throw ConfigError("ideal_blocks must be an array of block indices");
  return v.get<std::vector<std::size_t>>();
}

Outcome run_norm(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  o.result = verdict_json(uniform_norm(spec.element(param_string(d, "element")), c.horizon, c.threshold));
  return o;
}

Outcome run_spectrum(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  const double cluster = d.params.value("cluster_tol", defaults::kClusterTol);
  const SpectrumReport s = pro_spectrum(spec.element(param_string(d, "element")), c.horizon, cluster);
  o.result = {{"points", points_json(s.points)}, {"count", s.points.size()}, {"radius", s.radius},
              {"horizon", s.horizon}};
  return o;
}

Outcome run_bounded(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  const CoherentElement& e = spec.element(param_string(d, "element"));
  const BoundednessVerdict norm = uniform_norm(e, c.horizon, c.threshold);
  const BoundednessVerdict radius = is_spectrally_bounded(e, c.horizon, c.threshold);
  o.result = verdict_json(norm);
  o.result["spectral"] = verdict_json(radius);
  o.result["bounded"] = norm.bounded();
  o.result["spectrally_bounded"] = radius.bounded();
  if (e.properties().normal && norm.status != Boundedness::UnknownAtTruncation &&
      radius.status != Boundedness::UnknownAtTruncation) {
    o.require(norm.status == radius.status, "normal element: norm and spectral radius verdicts disagree");
  }
  return o;
}

Outcome run_funcalc(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  const CoherentElement& e = spec.element(param_string(d, "element"));
  if (!d.params.contains("function")) throw ConfigError("'funcalc' directive needs a 'function'");
  const FunctionDescriptor f = parse_function(d.params.at("function"), "funcalc.function");
  const CoherentElement lifted = lift_function(e, f, c.tol);
  const Level top = lifted.available(c.horizon);

  double mapping = 0.0;
  for (Level p = 1; p <= top; ++p) {
    std::vector<Complex> mapped;
    for (Complex z : values(spectrum(e.project(p)))) mapped.push_back(evaluate(f, z, c.tol));
    const auto image = values(spectrum(lifted.project(p)));
    double scale = 1.0;
    for (Complex z : mapped) scale = std::max(scale, std::abs(z));
    mapping = std::max(mapping, hausdorff_distance(mapped, image) / scale);
  }
  const CoherenceReport coherence = top > 1 ? check_coherence(lifted, top) : CoherenceReport{};
  double coherence_residual = 0.0;
  for (const auto& r : coherence.levels) coherence_residual = std::max(coherence_residual, r.residual);

  o.result = verdict_json(uniform_norm(lifted, c.horizon, c.threshold));
  o.result["function"] = describe(f);
  o.result["spectral_mapping_residual"] = mapping;
  o.result["coherence_residual"] = coherence_residual;
  o.require(coherence.pass, "lifted element is not coherent");
  o.require(mapping <= defaults::kClusterTol, "spectral mapping residual above the cluster tolerance");
  if (const auto* r = std::get_if<RationalFn>(&f); r && e.properties().selfadjoint) {
    const double bound = r->n / 2.0;
    o.result["sup_bound"] = bound;
    o.require(o.result["value"].get<double>() <= bound + c.tol, "||f_n(a)|| exceeds n/2");
  }
  return o;
}

Outcome run_check_exact(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  Rng rng = c.rng(d.command);
  const std::size_t probes = param_count(d, "probes", defaults::kExactnessProbes);
  const std::size_t length = param_count(d, "trace_length", defaults::kTraceLength);
  ExactnessReport report = [&]() {
    if (d.params.contains("ideal_blocks")) {
      const IdealDecomposition dec = closed_ideal(spec.tower(param_string(d, "tower")),
                                                  select_blocks(ideal_blocks(d)), c.horizon);
      return check_exactness(dec.inclusion, dec.quotient_map, probes, c.horizon, rng, c.tol, length);
    }
    return check_exactness(spec.homomorphism(param_string(d, "alpha")), spec.homomorphism(param_string(d, "beta")),
                           probes, c.horizon, rng, c.tol, length);
  }();
  json levels = json::array();
  for (const auto& l : report.levels) {
    levels.push_back({{"level", l.level},
                      {"image_rank", l.image_rank},
                      {"kernel_dimension", l.kernel_dimension},
                      {"exact", l.exact}});
  }
  // trace(n) against the 2/n^2 decay bound for kernel elements of norm at most 1.
  double excess = 0.0;
  double final_max = 0.0;
  for (const auto& p : report.probes) {
    for (std::size_t n = 1; n <= p.trace.size(); ++n) {
      excess = std::max(excess, p.trace[n - 1] - 2.0 / static_cast<double>(n * n));
    }
    final_max = std::max(final_max, p.final_residual);
  }
  o.result = {{"exact_original", report.exact_original},
              {"exact_bounded", report.exact_bounded},
              {"levels", levels},
              {"probes", report.probes.size()},
              {"trace_bound_excess", excess},
              {"final_residual", final_max}};
  if (!report.probes.empty()) o.result["trace"] = report.probes.front().trace;
  o.require(!report.exact_original || report.exact_bounded, "exactness was not preserved by the bounded part");
  if (report.exact_original) o.require(excess <= 1e-9, "f_n trace exceeds 2/n^2");
  return o;
}

json quotient_json(const QuotientIsoReport& r) {
  return {{"ideal_residual", r.ideal_residual},
          {"well_defined_residual", r.well_defined_residual},
          {"homomorphism_residual", r.homomorphism_residual},
          {"isometry_residual", r.isometry_residual},
          {"surjectivity_residual", r.surjectivity_residual},
          {"max_residual", r.max_residual()},
          {"pass", r.pass}};
}

Outcome run_quotient_iso(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  Rng rng = c.rng(d.command);
  const Tower& tower = spec.tower(param_string(d, "tower"));
  const std::size_t probes = param_count(d, "probes", defaults::kRandomProbes);
  if (d.params.contains("kernel_of_level")) {
    const Level p = param_count(d, "kernel_of_level", 1);
    const SeminormQuotientReport r = seminorm_quotient_check(tower, p, c.horizon, probes, rng, c.tol);
    o.result = quotient_json(r.quotient);
    o.result["level"] = p;
    o.result["factorization_residual"] = r.factorization_residual;
    o.result["seminorm_isometry_residual"] = r.isometry_residual;
    o.result["psi_bijective"] = r.psi_bijective;
    o.result["max_residual"] = std::max({r.quotient.max_residual(), r.factorization_residual, r.isometry_residual});
    o.require(r.pass, "A_p is not isometrically isomorphic to A_b/(ker p)_b within tolerance");
    return o;
  }
  const BlockSelector selector = d.params.contains("ideal_blocks") ? select_blocks(ideal_blocks(d)) : select_none();
  const QuotientIsoReport r = quotient_iso_check(tower, selector, c.horizon, probes, rng, c.tol);
  o.result = quotient_json(r);
  o.require(r.pass, "canonical map is not an isometric *-isomorphism within tolerance");
  return o;
}

Outcome run_gelfand(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  Rng rng = c.rng(d.command);
  const std::size_t probes = param_count(d, "probes", defaults::kRandomProbes);
  const GelfandReport r = d.params.contains("space")
                              ? duality_roundtrip(spec.space(param_string(d, "space")), c.horizon, probes, rng, c.tol)
                              : duality_roundtrip(spec.tower(param_string(d, "tower")), c.horizon, probes, rng, c.tol);
  o.result = {{"points", r.points},
              {"bijection", r.bijection},
              {"family_recovered", r.family_recovered},
              {"algebra_residual", r.algebra_residual},
              {"function_residual", r.function_residual},
              {"homomorphism_residual", r.homomorphism_residual},
              {"seminorm_residual", r.seminorm_residual}};
  o.require(r.pass, "duality round trip failed");
  return o;
}

Outcome run_unitary_log(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  const CoherentElement& u = spec.element(param_string(d, "element"));
  const double branch = d.params.value("branch_angle", std::numbers::pi);
  const LogResult r = unitary_log(u, branch, c.horizon, c.tol);
  const SpectrumReport s = pro_spectrum(r.log, c.horizon);
  o.result = {{"branch_angle", r.branch_angle},
              {"distance_to_identity", r.distance_to_identity},
              {"near_identity", r.near_identity},
              {"reassembly_residual", r.reassembly_residual},
              {"log_spectrum", points_json(s.points)}};
  o.require(r.reassembly_residual <= 10.0 * c.tol, "e^{i log u} does not reproduce u");
  return o;
}

Outcome run_exp_factor(const SpecFile& spec, const RunDirective& d, const Config& c) {
  Outcome o;
  const CoherentElement& u = spec.element(param_string(d, "element"));
  const ExpFactorization f = identity_component_check(u, c.horizon, c.tol);
  bool levels_ok = true;
  double level_residual = 0.0;
  for (Level p = 1; p <= f.horizon; ++p) {
    const ExpFactorization lf = level_exp_factorization(u, p, c.tol);
    levels_ok = levels_ok && lf.valid;
    level_residual = std::max(level_residual, lf.residual);
  }
  o.result = {{"factors", f.factors.size()}, {"residual", f.residual},      {"valid", f.valid},
              {"method", f.method},          {"levelwise_valid", levels_ok}, {"levelwise_residual", level_residual}};
  o.require(f.valid, "reassembly residual above 10 tol");
  o.require(levels_ok, "some level has no exponential factorization");
  return o;
}

using Handler = std::function<Outcome(const SpecFile&, const RunDirective&, const Config&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"norm", run_norm},
      {"spectrum", run_spectrum},
      {"bounded", run_bounded},
      {"funcalc", run_funcalc},
      {"check-exact", run_check_exact},
      {"quotient-iso", run_quotient_iso},
      {"gelfand-roundtrip", run_gelfand},
      {"unitary-log", run_unitary_log},
      {"exp-factor", run_exp_factor},
  };
  return table;
}

bool numbers_match(double actual, double expected) {
  return std::abs(actual - expected) <= 1e-9 * std::max(1.0, std::abs(expected));
}

/// Compares one result field against its expectation. Objects with min, max
/// or approx/tol keys are ranges; everything else must match.
void compare(const json& actual, const json& expected, const std::string& key, Outcome& o) {
  if (expected.is_object() && (expected.contains("min") || expected.contains("max") || expected.contains("approx"))) {
    if (!actual.is_number()) {
      o.require(false, key + ": expected a number, got " + actual.dump());
      return;
    }
    const double v = actual.get<double>();
    if (expected.contains("min")) o.require(v >= expected.at("min").get<double>(), key + " below min");
    if (expected.contains("max")) o.require(v <= expected.at("max").get<double>(), key + " above max");
    if (expected.contains("approx")) {
      const double target = expected.at("approx").get<double>();
      const double tol = expected.value("tol", 1e-9);
      o.require(std::abs(v - target) <= tol, key + " is " + actual.dump() + ", expected " + std::to_string(target));
    }
    return;
  }
  if (expected.is_number() && actual.is_number()) {
    o.require(numbers_match(actual.get<double>(), expected.get<double>()),
              key + " is " + actual.dump() + ", expected " + expected.dump());
    return;
  }
  if (expected.is_array() && actual.is_array()) {
    if (expected.size() != actual.size()) {
      o.require(false, key + " has " + std::to_string(actual.size()) + " entries, expected " +
                           std::to_string(expected.size()));
      return;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
      compare(actual[i], expected[i], key + "[" + std::to_string(i) + "]", o);
    }
    return;
  }
  o.require(actual == expected, key + " is " + actual.dump() + ", expected " + expected.dump());
}

/// Resolves a dotted path such as "spectral.status".
const json* field(const json& result, const std::string& key) {
  const json* node = &result;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &node->at(part);
    if (dot == std::string::npos) return node;
    start = dot + 1;
  }
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const BranchError*>(&e)) return "branch";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const TruncationError*>(&e)) return "truncation";
  if (dynamic_cast<const StructuralError*>(&e)) return "structural";
  if (dynamic_cast<const EigensolverError*>(&e)) return "eigensolver";
  if (dynamic_cast<const PreconditionError*>(&e)) return "precondition";
  return "error";
}

std::string subject_of(const RunDirective& d) {
  for (const char* key : {"element", "space", "tower", "alpha"}) {
    if (d.params.contains(key) && d.params.at(key).is_string()) return d.params.at(key).get<std::string>();
  }
  return {};
}

json run_directive(const SpecFile& spec, const RunDirective& d, const RunOptions& options, std::size_t id) {
  const auto handler = handlers().find(d.command);
  if (handler == handlers().end()) throw ConfigError("unknown command '" + d.command + "' in a run directive");
  const Config config = resolve(d, &spec, options);
  Outcome o;
  try {
    o = handler->second(spec, d, config);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    o = Outcome{};
    o.result = {{"error", error_kind(e)}, {"message", e.what()}};
    if (const auto* b = dynamic_cast<const BranchError*>(&e)) {
      o.result["eigenvalue"] = complex_json(b->eigenvalue());
      o.result["level"] = b->level();
    }
    if (!d.expect.contains("error")) o.require(false, std::string("raised ") + e.what());
  }
  if (d.expect.contains("error") && !o.result.contains("error")) o.require(false, "expected an error");
  for (const auto& [key, expected] : d.expect.items()) {
    const json* actual = field(o.result, key);
    if (!actual) {
      o.require(false, "result has no field '" + key + "'");
      continue;
    }
    compare(*actual, expected, key, o);
  }
  json record{{"record", "check"},       {"id", id},         {"command", d.command},
              {"claim", d.claim},        {"subject", subject_of(d)}, {"config", config.to_json()},
              {"result", o.result},      {"pass", o.pass}};
  if (!d.expect.empty()) record["expect"] = d.expect;
  if (!o.failures.empty()) record["failures"] = o.failures;
  return record;
}

json header(const RunOptions& options, const std::optional<std::string>& spec_path) {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  return {{"record", "header"},
          {"tool", "procstar"},
          {"command", options.command},
          {"spec", opt(spec_path)},
          {"overrides",
           {{"horizon", opt(options.horizon)},
            {"tol", opt(options.tol)},
            {"seed", opt(options.seed)},
            {"threshold", opt(options.threshold)}}},
          {"defaults",
           {{"horizon", kDefaultHorizon},
            {"cluster_tol", defaults::kClusterTol},
            {"normal_tol", defaults::kNormalTol},
            {"coherence_tol", defaults::kCoherenceTol},
            {"divergence_threshold", defaults::kDivergenceThreshold},
            {"rank_tol", defaults::kRankTol},
            {"unitary_tol", defaults::kUnitaryTol},
            {"conjugator_tol", defaults::kConjugatorTol},
            {"gelfand_tol", defaults::kGelfandTol},
            {"trace_length", defaults::kTraceLength},
            {"exactness_probes", defaults::kExactnessProbes},
            {"path_samples", defaults::kPathSamples},
            {"random_probes", defaults::kRandomProbes}}}};
}

// Selftest battery --------------------------------------------------------

json battery_record(std::size_t id, const std::string& name, std::size_t instances, double residual, double tol) {
  return {{"record", "check"},
          {"id", id},
          {"command", "selftest"},
          {"claim", name},
          {"subject", "random elements"},
          {"result", {{"instances", instances}, {"max_residual", residual}, {"tol", tol}}},
          {"pass", residual <= tol}};
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"norm",         "spectrum",          "bounded",
                                              "funcalc",      "check-exact",       "quotient-iso",
                                              "gelfand-roundtrip", "unitary-log",  "exp-factor",
                                              "paper-examples",    "selftest"};
  return names;
}

std::string bundled_spec_path() { return PROCSTAR_BUNDLED_SPEC; }

RunReport execute(const SpecFile& spec, const RunOptions& options) {
  RunReport report;
  report.header = header(options, spec.path);
  std::vector<RunDirective> selected;
  if (options.command == "paper-examples") {
    selected = spec.runs;
  } else if (options.element || options.tower || options.space) {
    RunDirective d;
    d.command = options.command;
    d.params = json::object();
    if (options.element) d.params["element"] = *options.element;
    if (options.tower) d.params["tower"] = *options.tower;
    if (options.space) d.params["space"] = *options.space;
    selected.push_back(std::move(d));
  } else {
    for (const auto& d : spec.runs) {
      if (d.command == options.command) selected.push_back(d);
    }
  }
  for (std::size_t i = 0; i < selected.size(); ++i) {
    report.checks.push_back(run_directive(spec, selected[i], options, i + 1));
  }
  return report;
}

RunReport selftest(const RunOptions& options) {
  RunReport report;
  report.header = header(options, std::nullopt);
  Rng rng(options.seed.value_or(kDefaultSeed));
  const Level depth = std::min<Level>(options.horizon.value_or(4), 6);
  const Tower tower = matrix_product_tower(depth);
  const double tol = options.tol.value_or(1e-10);
  const BlockAlgebra top = tower.level(depth);

  double cstar = 0.0, submult = 0.0, involution = 0.0, normal_radius = 0.0, monotone = 0.0, nesting = 0.0,
         mapping = 0.0;
  for (std::size_t k = 0; k < kSelftestProbes; ++k) {
    const AlgebraElement x = random_element(rng, top);
    const AlgebraElement y = random_element(rng, top);
    const double nx = cstar_norm(x);
    const double ny = cstar_norm(y);
    cstar = std::max(cstar, std::abs(cstar_norm(x.adjoint() * x) - nx * nx) / std::max(1.0, nx * nx));
    submult = std::max(submult, (cstar_norm(x * y) - nx * ny) / std::max(1.0, nx * ny));
    involution = std::max(involution, std::abs(cstar_norm(x.adjoint()) - nx) / std::max(1.0, nx));

    const AlgebraElement n = random_element(rng, top, ElementKind::Normal);
    const double nn = cstar_norm(n);
    normal_radius = std::max(normal_radius, std::abs(nn - spectral_radius(spectrum(n))) / std::max(1.0, nn));

    const AlgebraElement h = random_element(rng, top, ElementKind::Hermitian);
    const Polynomial p{{{Complex(0.5, 0.0), 2, 0}, {Complex(-1.0, 0.25), 1, 0}, {Complex(0.1, 0.0), 0, 0}}};
    std::vector<Complex> mapped;
    for (Complex z : values(spectrum(h))) mapped.push_back(evaluate(p, z));
    const auto image = values(spectrum(apply_function(h, p)));
    double scale = 1.0;
    for (Complex z : mapped) scale = std::max(scale, std::abs(z));
    mapping = std::max(mapping, hausdorff_distance(mapped, image) / scale);

    const CoherentElement e = random_coherent(rng, tower, depth);
    for (Level q = 1; q < depth; ++q) monotone = std::max(monotone, seminorm(e, q) - seminorm(e, q + 1));
    const auto smaller = pro_spectrum(e, depth - 1).points;
    const auto larger = pro_spectrum(e, depth).points;
    nesting = std::max(nesting, one_sided_distance(smaller, larger));
  }
  std::size_t id = 0;
  report.checks.push_back(battery_record(++id, "C*-identity ||x*x|| = ||x||^2", kSelftestProbes, cstar, tol));
  report.checks.push_back(battery_record(++id, "submultiplicativity ||xy|| <= ||x|| ||y||", kSelftestProbes,
                                         std::max(0.0, submult), tol));
  report.checks.push_back(battery_record(++id, "involution is isometric", kSelftestProbes, involution, tol));
  report.checks.push_back(
      battery_record(++id, "normal elements: norm equals spectral radius", kSelftestProbes, normal_radius, 1e-8));
  report.checks.push_back(battery_record(++id, "spectral mapping for polynomials", kSelftestProbes, mapping, 1e-8));
  report.checks.push_back(
      battery_record(++id, "seminorms are nondecreasing in the level", kSelftestProbes, std::max(0.0, monotone), 1e-12));
  report.checks.push_back(battery_record(++id, "spectra grow with the horizon", kSelftestProbes, nesting, 1e-8));
  return report;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const auto& known = commands();
    if (std::find(known.begin(), known.end(), options.command) == known.end()) {
      throw ConfigError("unknown command '" + options.command + "'");
    }
    RunReport report;
    if (options.command == "selftest") {
      report = selftest(options);
    } else {
      std::string path;
      if (options.spec_path) {
        path = *options.spec_path;
      } else if (options.command == "paper-examples") {
        path = bundled_spec_path();
      } else {
        throw ConfigError("'" + options.command + "' needs --spec");
      }
      report = execute(load_spec(path), options);
    }
    out << summary_table(report);
    if (options.out_path) emit_trace(report, *options.out_path);
    return report.all_passed() ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace procstar::harness
