// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "procstar/bounded.hpp"
#include "procstar/calculus.hpp"
#include "procstar/core.hpp"
#include "procstar/gelfand.hpp"
#include "procstar/generators.hpp"
#include "procstar/harness/runner.hpp"
#include "procstar/random.hpp"
#include "procstar/unitary.hpp"

using namespace procstar;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

std::uint64_t bundled_seed() { return harness::load_spec(harness::bundled_spec_path()).seed.value_or(1); }

Outcome l_example() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const CoherentElement l = superdiagonal_element(matrix_product_tower());
  const SpectrumReport s = pro_spectrum(l, 200);
  o.require(s.points.size() == 1 && std::abs(s.points[0]) == 0.0, "spectrum is not {0}");
  o.require(s.radius <= 1e-10, "spectral radius " + fmt(s.radius));
  const BoundednessVerdict v = uniform_norm(l, 200, 100);
  o.require(v.status == Boundedness::Unbounded, "verdict " + to_string(v.status));
  o.require(v.value == static_cast<double>(v.level - 1), "witness value " + fmt(v.value) + " at level " + std::to_string(v.level));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds <= 5.0, "took " + fmt(seconds) + " s");
  for (Level n = 1; n < 200; ++n) {
    o.require(std::abs(seminorm(l, n + 1) - static_cast<double>(n)) <= 1e-10, "seminorm at level " + std::to_string(n + 1));
  }
  if (o.pass) o.detail = "witness level " + std::to_string(v.level) + ", value " + fmt(v.value) + ", spectrum and norm in " + fmt(seconds) + " s";
  return o;
}

Outcome exactness() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const harness::SpecFile spec = harness::load_spec(harness::bundled_spec_path());
  const Tower t = spec.tower("prod5");
  const IdealDecomposition d = closed_ideal(t, select_blocks({1}), 5);
  Rng rng(bundled_seed());
  const ExactnessReport r = check_exactness(d.inclusion, d.quotient_map, 20, 5, rng);
  o.require(r.exact_original, "original sequence not exact");
  o.require(r.exact_bounded, "bounded sequence not exact");
  o.require(r.probes.size() == 20, "probe count");
  double worst = -1.0;
  for (const auto& probe : r.probes) {
    o.require(probe.kernel_norm <= 1.0, "probe outside [-1, 1]");
    o.require(probe.trace.size() >= 50, "short trace");
    for (std::size_t n = 1; n <= 50 && n <= probe.trace.size(); ++n) {
      const double slack = probe.trace[n - 1] - 2.0 / static_cast<double>(n * n);
      worst = std::max(worst, slack);
      o.require(slack <= 1e-9, "trace above 2/n^2 at n = " + std::to_string(n));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(seconds <= 10.0, "took " + fmt(seconds) + " s");
  if (o.pass) o.detail = "20 probes, max trace(n) - 2/n^2 = " + fmt(worst);
  return o;
}

Outcome quotients() {
  Outcome o;
  const harness::SpecFile spec = harness::load_spec(harness::bundled_spec_path());
  Rng rng(bundled_seed());
  const QuotientIsoReport q = quotient_iso_check(spec.tower("prod4"), select_blocks({1}), 4, 100, rng);
  o.require(q.pass && q.max_residual() <= 1e-10, "block ideal residual " + fmt(q.max_residual()));
  double worst = q.max_residual();
  for (Level p = 1; p <= 3; ++p) {
    const SeminormQuotientReport s = seminorm_quotient_check(spec.tower("prod5"), p, 5, 100, rng);
    const double r = std::max({s.quotient.max_residual(), s.factorization_residual, s.isometry_residual});
    worst = std::max(worst, r);
    o.require(s.pass && s.psi_bijective && r <= 1e-10, "A_p quotient at p = " + std::to_string(p) + ", residual " + fmt(r));
  }
  if (o.pass) o.detail = "max residual " + fmt(worst);
  return o;
}

Outcome gelfand() {
  Outcome o;
  const harness::SpecFile spec = harness::load_spec(harness::bundled_spec_path());
  Rng rng(bundled_seed());
  const GelfandReport x = duality_roundtrip(spec.space("X5"), 5, 100, rng, 1e-12);
  const GelfandReport c = duality_roundtrip(spec.tower("comm5"), 5, 100, rng, 1e-12);
  double worst = 0.0;
  for (const auto* r : {&x, &c}) {
    o.require(r->points == 5, "expected 5 points");
    o.require(r->bijection && r->family_recovered, "bijection or family recovery failed");
    const double m = std::max({r->algebra_residual, r->function_residual, r->homomorphism_residual, r->seminorm_residual});
    worst = std::max(worst, m);
    o.require(r->pass && m <= 1e-12, "residual " + fmt(m));
  }
  if (o.pass) o.detail = "max residual " + fmt(worst);
  return o;
}

Outcome unitaries() {
  Outcome o;
  Rng rng(bundled_seed());
  double worst_residual = 0.0;
  double worst_norm = 0.0;
  auto check_norm = [&](const CoherentElement& u, Level d) {
    double hi = 0.0;
    for (Level p = 1; p <= d; ++p) {
      const double n = seminorm(u, p);
      o.require(n >= 1.0 - 1e-10 && n <= 1.0 + 1e-10, "seminorm " + fmt(n));
      hi = std::max(hi, std::abs(n - 1.0));
    }
    worst_norm = std::max(worst_norm, hi);
  };
  for (int k = 0; k < 100; ++k) {
    const Level d = 1 + rng.below(5);
    const Tower t = matrix_product_tower(d);
    CoherentElement h = random_coherent(rng, t, d, ElementKind::Hermitian);
    h = h.scaled(rng.uniform(0.05, 1.0) / cstar_norm(h.project(d)));
    const CoherentElement u = exp_selfadjoint(h, 1.0, d);
    double distance = 0.0;
    for (Level p = 1; p <= d; ++p) distance = std::max(distance, cstar_norm(AlgebraElement::identity(t.level(p)) - u.project(p)));
    o.require(distance <= 0.99, "constructed ||1 - u|| = " + fmt(distance));
    const ExpFactorization f = identity_component_check(u, d);
    o.require(f.valid && f.factors.size() == 1 && f.residual <= 1e-9, "one-factor factorization failed");
    worst_residual = std::max(worst_residual, f.residual);
    check_norm(u, d);
  }
  for (int k = 0; k < 100; ++k) {
    const Level d = 1 + rng.below(5);
    const CoherentElement u = random_coherent(rng, matrix_product_tower(d), d, ElementKind::Unitary);
    for (Level p = 1; p <= d; ++p) {
      const ExpFactorization f = level_exp_factorization(u, p);
      o.require(f.valid && f.residual <= 1e-9, "level factorization failed at level " + std::to_string(p));
      worst_residual = std::max(worst_residual, f.residual);
    }
    check_norm(u, d);
  }
  if (o.pass) o.detail = "max residual " + fmt(worst_residual) + ", max | ||u|| - 1 | " + fmt(worst_norm);
  return o;
}

BlockAlgebra random_algebra(Rng& rng) {
  std::vector<std::size_t> sizes(1 + rng.below(3));
  for (auto& n : sizes) n = 1 + rng.below(4);
  return BlockAlgebra(sizes);
}

Outcome invariants() {
  Outcome o;
  Rng rng(bundled_seed());
  constexpr int kInstances = 200;
  std::size_t failures = 0;
  auto count = [&](bool ok, const char* name) {
    if (!ok) {
      ++failures;
      o.require(false, name);
    }
  };
  for (int k = 0; k < kInstances; ++k) {
    const BlockAlgebra a = random_algebra(rng);
    const AlgebraElement x = random_element(rng, a);
    const AlgebraElement y = random_element(rng, a);
    const double nx = cstar_norm(x);
    count(std::abs(cstar_norm(x.adjoint() * x) - nx * nx) <= 1e-10 * nx * nx, "C*-identity");
    count(cstar_norm(x * y) <= nx * cstar_norm(y) + 1e-10, "submultiplicativity");
    count(std::abs(cstar_norm(x.adjoint()) - nx) <= 1e-12 * std::max(1.0, nx), "involution isometry");

    const AlgebraElement z = random_element(rng, a, ElementKind::Normal);
    Polynomial f;
    for (unsigned d = 0; d <= 2; ++d) f.terms.push_back({0.5 * rng.complex_normal(), d, 0});
    std::vector<Complex> mapped;
    for (Complex w : values(spectrum(z))) mapped.push_back(evaluate(f, w));
    const auto fz = values(spectrum(apply_function(z, f)));
    count(hausdorff_distance(fz, mapped) <= 1e-8 * std::max(1.0, spectral_radius(spectrum(apply_function(z, f)))),
          "spectral mapping");
    const double r = spectral_radius(spectrum(z));
    count(std::abs(cstar_norm(z) - r) <= 1e-10 * std::max(1.0, r), "normal norm = spectral radius");

    const Level depth = 2 + rng.below(4);
    const CoherentElement e = random_coherent(rng, matrix_product_tower(depth), depth);
    for (Level p = 1; p < depth; ++p) {
      count(seminorm(e, p) <= seminorm(e, p + 1) + 1e-12, "seminorm monotonicity");
      const auto lower = values(spectrum(e.project(p)));
      const auto upper = values(spectrum(e.project(p + 1)));
      count(one_sided_distance(lower, upper) <= 1e-8 * std::max(1.0, cstar_norm(e.project(p + 1))), "spectral nesting");
    }
  }
  if (o.pass) o.detail = "7 invariants x " + std::to_string(kInstances) + " instances, 0 failures";
  return o;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "procstar_acceptance";
  fs::create_directories(dir);
  const fs::path a = dir / "first.jsonl";
  const fs::path b = dir / "second.jsonl";
  auto launch = [](const fs::path& out) {
    const std::string cmd = std::string("\"") + PROCSTAR_CLI + "\" paper-examples --out \"" + out.string() + "\" > /dev/null";
    return std::system(cmd.c_str());
  };
  o.require(launch(a) == 0, "first run failed");
  o.require(launch(b) == 0, "second run failed");
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string first = slurp(a);
  o.require(!first.empty(), "empty report");
  o.require(first == slurp(b), "reports differ");
  if (o.pass) o.detail = std::to_string(first.size()) + " identical bytes";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"L example: spectrum {0}, norm unbounded", l_example},
      {"exactness of the block-ideal sequence", exactness},
      {"quotient isomorphisms", quotients},
      {"Gelfand round trips", gelfand},
      {"unitary suite", unitaries},
      {"core invariant suite", invariants},
      {"determinism of paper-examples", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, body] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d %s: %s (%s; %.2f s)\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), seconds);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
