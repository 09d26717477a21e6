#include "procstar/homomorphism.hpp"

#include <algorithm>

#include "procstar/core.hpp"

namespace procstar {

TowerHomomorphism::TowerHomomorphism(Tower source, Tower target, LevelMapRule rule, std::string name,
                                     SourceLevelRule source_level)
    : source_(std::move(source)),
      target_(std::move(target)),
      rule_(std::move(rule)),
      name_(std::move(name)),
      source_level_(std::move(source_level)) {}

TowerHomomorphism TowerHomomorphism::identity(const Tower& tower) {
  return TowerHomomorphism(tower, tower, [tower](Level p) { return BlockMap::identity(tower.level(p)); }, "id");
}

TowerHomomorphism TowerHomomorphism::zero(const Tower& source, const Tower& target) {
  return TowerHomomorphism(
      source, target, [source, target](Level p) { return BlockMap::zero(source.level(p), target.level(p)); }, "0");
}

TowerHomomorphism TowerHomomorphism::projection_to_level(const Tower& tower, Level p) {
  const Tower target = Tower::single(tower.level(p), tower.name() + "_" + std::to_string(p));
  return TowerHomomorphism(
      tower, target, [tower, p](Level) { return BlockMap::identity(tower.level(p)); }, "pi_" + std::to_string(p),
      [p](Level) { return p; });
}

Level TowerHomomorphism::source_level(Level q) const {
  if (q == 0) throw PreconditionError("tower levels are numbered from 1");
  return source_level_ ? source_level_(q) : q;
}

BlockMap TowerHomomorphism::level_map(Level q) const {
  BlockMap map = rule_(q);
  if (!(map.source() == source_.level(source_level(q))) || !(map.target() == target_.level(q))) {
    throw StructuralError("homomorphism " + name_ + " level " + std::to_string(q) + " does not match the towers");
  }
  return map;
}

CoherentElement TowerHomomorphism::operator()(const CoherentElement& e) const {
  if (!e.tower().same_as(source_)) {
    throw StructuralError("homomorphism " + name_ + " applied to an element of another tower");
  }
  const TowerHomomorphism self = *this;
  auto out = CoherentElement::from_block_rule(target_, [self, e](Level q, std::size_t j) {
    const BlockMap map = self.level_map(q);
    const auto& a = map.assignments()[j];
    if (!a.source) {
      const auto n = static_cast<Eigen::Index>(map.target().block_size(j));
      return Matrix(Matrix::Zero(n, n));
    }
    return map.image_block(j, e.block(self.source_level(q), *a.source));
  });
  const bool complete = e.data_horizon() && source_.depth() && *e.data_horizon() >= *source_.depth();
  if (e.data_horizon() && !complete) {
    // The image keeps the levels whose source level is still materialized.
    const Level m = *e.data_horizon();
    auto resolved = [&](Level q) {
      const Level s = source_level(q);
      return source_.depth() ? std::min(s, *source_.depth()) : s;
    };
    Level top = target_.depth() ? *target_.depth() : m;
    while (top > 0 && resolved(top) > m) --top;
    if (top == 0) throw TruncationError("image of " + e.label() + " has no materialized level", 1);
    std::vector<AlgebraElement> levels;
    levels.reserve(top);
    for (Level q = 1; q <= top; ++q) levels.push_back(out.project(q));
    out = CoherentElement::from_levels(target_, std::move(levels));
  }
  return out.with_coherence_tol(e.coherence_tol());
}

Level TowerHomomorphism::check_horizon(Level horizon) const {
  if (source_.finite() && target_.finite()) return std::min(horizon, std::max(*source_.depth(), *target_.depth()));
  return horizon;
}

bool TowerHomomorphism::levelwise_surjective(Level horizon) const {
  const Level top = check_horizon(horizon);
  for (Level q = 1; q <= top; ++q) {
    if (!level_map(q).is_surjective()) return false;
  }
  return true;
}

TowerHomomorphism compose(const TowerHomomorphism& outer, const TowerHomomorphism& inner) {
  if (!outer.source().same_as(inner.target())) {
    throw StructuralError("composed homomorphisms do not share a tower");
  }
  return TowerHomomorphism(
      inner.source(), outer.target(),
      [outer, inner](Level q) { return compose(outer.level_map(q), inner.level_map(outer.source_level(q))); },
      outer.name() + "." + inner.name(),
      [outer, inner](Level q) { return inner.source_level(outer.source_level(q)); });
}

NaturalityReport check_naturality(const TowerHomomorphism& phi, Level horizon, std::size_t probes, Rng& rng,
                                  double tol) {
  NaturalityReport report;
  const Level top = phi.check_horizon(horizon);
  for (Level q = 1; q <= top; ++q) {
    const BlockMap here = phi.level_map(q);
    for (std::size_t k = 0; k < probes; ++k) {
      const AlgebraElement y = random_element(rng, here.source());
      const AlgebraElement z = random_element(rng, here.source());
      const double s2 = std::max(1.0, cstar_norm(y) * cstar_norm(z));
      report.homomorphism_residual =
          std::max({report.homomorphism_residual, cstar_norm(here(y * z) - here(y) * here(z)) / s2,
                    cstar_norm(here(y.adjoint()) - here(y).adjoint()) / std::max(1.0, cstar_norm(y)),
                    cstar_norm(here(y + z) - here(y) - here(z)) / s2});
    }
    if (q == top) break;
    const BlockMap above = phi.level_map(q + 1);
    const Level s_here = phi.source_level(q);
    const Level s_above = phi.source_level(q + 1);
    if (s_above < s_here) throw StructuralError("source levels of " + phi.name() + " decrease at " + std::to_string(q));
    const BlockMap pi_source = phi.source().composite_map(s_here, s_above);
    const BlockMap pi_target = phi.target().connecting_map(q);
    for (std::size_t k = 0; k < probes; ++k) {
      const AlgebraElement x = random_element(rng, above.source());
      const double scale = std::max(1.0, cstar_norm(x));
      report.naturality_residual =
          std::max(report.naturality_residual, cstar_norm(pi_target(above(x)) - here(pi_source(x))) / scale);
    }
  }
  report.pass = report.naturality_residual <= tol && report.homomorphism_residual <= tol;
  return report;
}

}  // namespace procstar
