#pragma once

#include <functional>
#include <string>

#include "procstar/random.hpp"
#include "procstar/tower.hpp"

namespace procstar {

/// A *-homomorphism phi: A -> B between towers, given for each target level
/// q by a source level s(q) and a block map phi_q: A_{s(q)} -> B_q.
///
/// Usually s(q) = q. Level maps have the block-copy shape of BlockMap but
/// need not be surjective. Finite towers are constant past their depth, so
/// towers of different depths can be related.
class TowerHomomorphism {
 public:
  using LevelMapRule = std::function<BlockMap(Level)>;
  using SourceLevelRule = std::function<Level(Level)>;

  TowerHomomorphism(Tower source, Tower target, LevelMapRule rule, std::string name = {},
                    SourceLevelRule source_level = {});

  static TowerHomomorphism identity(const Tower& tower);
  static TowerHomomorphism zero(const Tower& source, const Tower& target);
  /// pi_p: A -> A_p, with A_p viewed as a single-level tower (returned as target()).
  static TowerHomomorphism projection_to_level(const Tower& tower, Level p);

  const Tower& source() const noexcept { return source_; }
  const Tower& target() const noexcept { return target_; }
  const std::string& name() const noexcept { return name_; }

  Level source_level(Level q) const;
  BlockMap level_map(Level q) const;
  CoherentElement operator()(const CoherentElement& e) const;

  /// Levels over which the homomorphism is checked: the larger of the two
  /// depths when both towers are finite, capped by horizon.
  Level check_horizon(Level horizon) const;
  bool levelwise_surjective(Level horizon) const;

 private:
  Tower source_;
  Tower target_;
  LevelMapRule rule_;
  std::string name_;
  SourceLevelRule source_level_;
};

/// outer after inner.
TowerHomomorphism compose(const TowerHomomorphism& outer, const TowerHomomorphism& inner);

struct NaturalityReport {
  double naturality_residual = 0.0;
  double homomorphism_residual = 0.0;
  bool pass = true;
};

/// Probes naturality (pi^B phi_{q+1} = phi_q pi^A) and the *-homomorphism
/// identities of every level map on random elements.
NaturalityReport check_naturality(const TowerHomomorphism& phi, Level horizon, std::size_t probes, Rng& rng,
                                  double tol = 1e-12);

}  // namespace procstar
