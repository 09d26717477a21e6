#include "procstar/gelfand.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <unordered_map>

#include "procstar/calculus.hpp"

namespace procstar {

const std::vector<std::size_t>& CharacterSpace::level_points(Level p) const {
  if (p == 0 || p > level_points_.size()) {
    throw PreconditionError("level " + std::to_string(p) + " is outside the character space horizon " +
                            std::to_string(horizon_));
  }
  return level_points_[p - 1];
}

std::vector<std::size_t> CharacterSpace::injection(Level p) const {
  if (p == 0 || p >= level_points_.size()) {
    throw PreconditionError("no injection out of level " + std::to_string(p) + " below the horizon");
  }
  const BlockMap map = tower_.connecting_map(p);
  std::vector<std::size_t> out;
  for (const auto& a : map.assignments()) out.push_back(*a.source);
  return out;
}

CharacterSpace character_space(const Tower& tower, Level horizon) {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  const Level top = tower.effective_horizon(horizon);
  CharacterSpace space(tower, top);
  for (Level p = 1; p <= top; ++p) {
    const BlockAlgebra algebra = tower.level(p);
    for (std::size_t j = 0; j < algebra.block_count(); ++j) {
      if (algebra.block_size(j) != 1) {
        throw PreconditionError("tower " + tower.name() + " is not commutative: block " + std::to_string(j) +
                                " of level " + std::to_string(p) + " has size " +
                                std::to_string(algebra.block_size(j)));
      }
    }
    std::vector<std::size_t> ids(algebra.block_count(), static_cast<std::size_t>(-1));
    std::vector<bool> inherited(algebra.block_count(), false);
    if (p > 1) {
      const BlockMap map = tower.connecting_map(p - 1);
      const auto& below = space.level_points_.back();
      for (std::size_t j = 0; j < below.size(); ++j) {
        const std::size_t s = *map.assignments()[j].source;
        ids[s] = below[j];
        inherited[s] = true;
      }
    }
    for (std::size_t j = 0; j < ids.size(); ++j) {
      if (inherited[j]) continue;
      ids[j] = space.points_.size();
      space.points_.push_back({p, j});
    }
    space.level_points_.push_back(std::move(ids));
  }
  return space;
}

GelfandTransform evaluation_iso(const CharacterSpace& space, const CoherentElement& e) {
  if (!e.tower().same_as(space.tower())) {
    throw StructuralError("element " + e.label() + " does not live on the tower of the character space");
  }
  GelfandTransform out;
  out.values.reserve(space.points().size());
  for (const Character& c : space.points()) out.values.push_back(e.block(c.birth, c.block)(0, 0));
  return out;
}

CoherentElement inverse_transform(const CharacterSpace& space, const std::vector<Complex>& values) {
  if (values.size() != space.points().size()) {
    throw StructuralError("function has " + std::to_string(values.size()) + " values for " +
                          std::to_string(space.points().size()) + " characters");
  }
  std::vector<AlgebraElement> levels;
  for (Level p = 1; p <= space.horizon(); ++p) {
    const auto& ids = space.level_points(p);
    std::vector<Matrix> blocks;
    blocks.reserve(ids.size());
    for (std::size_t id : ids) blocks.push_back(Matrix::Constant(1, 1, values[id]));
    levels.emplace_back(space.tower().level(p), std::move(blocks));
  }
  return CoherentElement::from_levels(space.tower(), std::move(levels));
}

CoveredSpace::CoveredSpace(MemberRule members, std::function<std::string(std::size_t)> name,
                           std::optional<Level> depth)
    : members_(std::move(members)), name_(std::move(name)), depth_(depth) {}

CoveredSpace::CoveredSpace(std::vector<std::string> points, std::vector<std::vector<std::size_t>> chain) {
  if (chain.empty()) throw StructuralError("a covered space needs at least one member");
  std::vector<bool> seen_before(points.size(), false);
  for (std::size_t k = 0; k < chain.size(); ++k) {
    std::vector<bool> here(points.size(), false);
    for (std::size_t id : chain[k]) {
      if (id >= points.size()) {
        throw StructuralError("member F_" + std::to_string(k + 1) + " names missing point " + std::to_string(id));
      }
      if (here[id]) throw StructuralError("member F_" + std::to_string(k + 1) + " repeats " + points[id]);
      here[id] = true;
    }
    for (std::size_t id = 0; id < points.size(); ++id) {
      if (seen_before[id] && !here[id]) {
        throw StructuralError("members are not nested: " + points[id] + " is in F_" + std::to_string(k) +
                              " but not in F_" + std::to_string(k + 1));
      }
    }
    seen_before = here;
  }
  for (std::size_t id = 0; id < points.size(); ++id) {
    if (!seen_before[id]) throw StructuralError("members do not cover " + points[id]);
  }
  const Level depth = chain.size();
  auto shared_chain = std::make_shared<const std::vector<std::vector<std::size_t>>>(std::move(chain));
  auto shared_points = std::make_shared<const std::vector<std::string>>(std::move(points));
  members_ = [shared_chain](Level k) { return (*shared_chain)[k - 1]; };
  name_ = [shared_points](std::size_t id) { return (*shared_points)[id]; };
  depth_ = depth;
}

CoveredSpace CoveredSpace::countable(MemberRule members, std::function<std::string(std::size_t)> name) {
  if (!name) name = [](std::size_t id) { return "x" + std::to_string(id); };
  return CoveredSpace(std::move(members), std::move(name), std::nullopt);
}

CoveredSpace CoveredSpace::initial_segments(std::optional<Level> depth) {
  auto members = [](Level k) {
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = i;
    return out;
  };
  return CoveredSpace(members, [](std::size_t id) { return "x" + std::to_string(id); }, depth);
}

std::vector<std::size_t> CoveredSpace::member(Level k) const {
  if (k == 0) throw PreconditionError("members are numbered from 1");
  if (depth_ && k > *depth_) k = *depth_;
  return members_(k);
}

std::string CoveredSpace::point_name(std::size_t id) const { return name_(id); }

namespace {

std::unordered_map<std::size_t, std::size_t> positions_of(const std::vector<std::size_t>& ids) {
  std::unordered_map<std::size_t, std::size_t> out;
  for (std::size_t i = 0; i < ids.size(); ++i) out.emplace(ids[i], i);
  return out;
}

}  // namespace

Tower cf_algebra(const CoveredSpace& space) {
  auto levels = [space](Level k) { return BlockAlgebra(std::vector<std::size_t>(space.member(k).size(), 1)); };
  auto maps = [space](Level k) {
    const auto lower = space.member(k);
    const auto upper = space.member(k + 1);
    const auto where = positions_of(upper);
    std::vector<BlockMap::Assignment> assignments;
    assignments.reserve(lower.size());
    for (std::size_t id : lower) {
      const auto it = where.find(id);
      if (it == where.end()) {
        throw StructuralError("members are not nested: " + space.point_name(id) + " is in F_" + std::to_string(k) +
                              " but not in F_" + std::to_string(k + 1));
      }
      assignments.push_back({it->second, std::nullopt});
    }
    return BlockMap(BlockAlgebra(std::vector<std::size_t>(upper.size(), 1)),
                    BlockAlgebra(std::vector<std::size_t>(lower.size(), 1)), std::move(assignments));
  };
  return Tower::lazy(levels, maps, space.depth(), "C_F(X)");
}

CoherentElement cf_function(const Tower& cf, const CoveredSpace& space, std::function<Complex(std::size_t)> f) {
  return CoherentElement::from_block_rule(cf, [space, f](Level k, std::size_t j) {
    return Matrix(Matrix::Constant(1, 1, f(space.member(k)[j])));
  });
}

CoveredSpace covered_space_of(const CharacterSpace& space) {
  std::vector<std::string> names;
  names.reserve(space.points().size());
  for (const Character& c : space.points()) {
    names.push_back("chi(" + std::to_string(c.birth) + "," + std::to_string(c.block) + ")");
  }
  std::vector<std::vector<std::size_t>> chain;
  for (Level p = 1; p <= space.horizon(); ++p) chain.push_back(space.level_points(p));
  return CoveredSpace(std::move(names), std::move(chain));
}

namespace {

/// Largest blockwise difference between two elements with the same block sizes.
double level_distance(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.block_count() != y.block_count()) return std::numeric_limits<double>::infinity();
  double out = 0.0;
  for (std::size_t j = 0; j < x.block_count(); ++j) {
    if (x.block(j).rows() != y.block(j).rows()) return std::numeric_limits<double>::infinity();
    out = std::max(out, (x.block(j) - y.block(j)).cwiseAbs().maxCoeff());
  }
  return out;
}

double element_distance(const CoherentElement& x, const CoherentElement& y, Level top) {
  double out = 0.0;
  for (Level p = 1; p <= top; ++p) out = std::max(out, level_distance(x.project(p), y.project(p)));
  return out;
}

/// Homomorphism, seminorm and round-trip residuals for elements a, b of a commutative tower.
void probe_algebra(const CharacterSpace& space, const CoherentElement& a, const CoherentElement& b,
                   GelfandReport& report) {
  const Level top = space.horizon();
  const auto ea = evaluation_iso(space, a).values;
  const auto eb = evaluation_iso(space, b).values;
  const auto eab = evaluation_iso(space, a * b).values;
  const auto esum = evaluation_iso(space, a + b).values;
  const auto estar = evaluation_iso(space, a.adjoint()).values;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    report.homomorphism_residual = std::max({report.homomorphism_residual, std::abs(eab[i] - ea[i] * eb[i]),
                                             std::abs(esum[i] - ea[i] - eb[i]), std::abs(estar[i] - std::conj(ea[i]))});
  }
  for (Level p = 1; p <= top; ++p) {
    double sup = 0.0;
    for (std::size_t id : space.level_points(p)) sup = std::max(sup, std::abs(ea[id]));
    report.seminorm_residual = std::max(report.seminorm_residual, std::abs(seminorm(a, p) - sup));
  }
  // A -> C(Delta(A)) -> A, once through the inverse transform and once
  // through the algebra C_{Phi(A)}(Delta(A)) built from the character space.
  report.algebra_residual = std::max(report.algebra_residual, element_distance(inverse_transform(space, ea), a, top));
  const CoveredSpace dual = covered_space_of(space);
  const CoherentElement rebuilt = cf_function(cf_algebra(dual), dual, [&ea](std::size_t id) { return ea[id]; });
  report.algebra_residual = std::max(report.algebra_residual, element_distance(rebuilt, a, top));
}

}  // namespace

GelfandReport duality_roundtrip(const CoveredSpace& space, Level horizon, std::size_t probes, Rng& rng, double tol) {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  const Level top = space.depth() ? std::min(horizon, *space.depth()) : horizon;
  const Tower algebra = cf_algebra(space);
  const CharacterSpace characters = character_space(algebra, top);

  // x -> ev_x: the character reading x's block, the same at every level containing x.
  GelfandReport report;
  std::map<std::size_t, std::size_t> ev_of;
  bool consistent = true;
  bool family = true;
  for (Level k = 1; k <= top; ++k) {
    const auto member = space.member(k);
    const auto& ids = characters.level_points(k);
    for (std::size_t j = 0; j < member.size(); ++j) {
      const auto [it, fresh] = ev_of.emplace(member[j], ids[j]);
      if (!fresh && it->second != ids[j]) consistent = false;
    }
    // Delta(A_k) pulled back to X must be F_k.
    std::vector<std::size_t> pulled;
    for (std::size_t id : ids) {
      for (const auto& [x, rho] : ev_of) {
        if (rho == id) pulled.push_back(x);
      }
    }
    auto sorted_member = member;
    std::sort(sorted_member.begin(), sorted_member.end());
    std::sort(pulled.begin(), pulled.end());
    family = family && pulled == sorted_member;
  }
  std::vector<bool> hit(characters.points().size(), false);
  bool injective = true;
  for (const auto& [x, rho] : ev_of) {
    if (hit[rho]) injective = false;
    hit[rho] = true;
  }
  report.points = ev_of.size();
  report.bijection = consistent && injective && std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
  report.family_recovered = family;

  for (std::size_t k = 0; k < probes; ++k) {
    std::map<std::size_t, Complex> f;
    std::map<std::size_t, Complex> g;
    for (const auto& entry : ev_of) f[entry.first] = rng.complex_normal();
    for (const auto& entry : ev_of) g[entry.first] = rng.complex_normal();
    const CoherentElement fe = cf_function(algebra, space, [&f](std::size_t x) { return f.at(x); });
    const CoherentElement ge = cf_function(algebra, space, [&g](std::size_t x) { return g.at(x); });
    const auto values = evaluation_iso(characters, fe).values;
    for (const auto& [x, rho] : ev_of) {
      report.function_residual = std::max(report.function_residual, std::abs(values[rho] - f.at(x)));
    }
    probe_algebra(characters, fe, ge, report);
  }
  report.pass = report.bijection && report.family_recovered &&
                std::max({report.algebra_residual, report.function_residual, report.homomorphism_residual,
                          report.seminorm_residual}) <= tol;
  return report;
}

GelfandReport duality_roundtrip(const Tower& tower, Level horizon, std::size_t probes, Rng& rng, double tol) {
  const CharacterSpace characters = character_space(tower, horizon);
  const Level top = characters.horizon();
  // Delta(A) -> Delta(C_{Phi(A)}(Delta(A))) and the family bookkeeping.
  GelfandReport report = duality_roundtrip(covered_space_of(characters), top, probes, rng, tol);
  for (std::size_t k = 0; k < probes; ++k) {
    const CoherentElement a = random_coherent(rng, tower, top);
    const CoherentElement b = random_coherent(rng, tower, top);
    probe_algebra(characters, a, b, report);
  }
  report.pass = report.bijection && report.family_recovered &&
                std::max({report.algebra_residual, report.function_residual, report.homomorphism_residual,
                          report.seminorm_residual}) <= tol;
  return report;
}

}  // namespace procstar
