#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "procstar/block_map.hpp"
#include "procstar/config.hpp"

namespace procstar {

/// A chain A_1 <- A_2 <- A_3 <- ... of block algebras with surjective
/// connecting maps, modelling the inverse limit lim A_p.
///
/// Towers are immutable and cheap to copy. Levels and maps come from pure
/// rules and are recomputed on demand; nothing is cached, so lazily infinite
/// towers such as the product of all M_n cost only what is asked of them.
/// A finite tower of depth d is constant past d: level(p) = level(d) and the
/// connecting maps beyond d are identities.
class Tower {
 public:
  using LevelRule = std::function<BlockAlgebra(Level)>;
  /// Rule p -> the connecting map A_{p+1} -> A_p.
  using MapRule = std::function<BlockMap(Level)>;

  static Tower lazy(LevelRule levels, MapRule maps, std::optional<Level> depth = std::nullopt,
                    std::string name = {});
  /// levels.size() - 1 maps; maps[i] goes from levels[i+1] onto levels[i].
  static Tower from_levels(std::vector<BlockAlgebra> levels, std::vector<BlockMap> maps, std::string name = {});
  /// A single C*-algebra seen as a constant tower.
  static Tower single(BlockAlgebra algebra, std::string name = {});

  const std::string& name() const noexcept;
  std::optional<Level> depth() const noexcept;
  bool finite() const noexcept { return depth().has_value(); }
  /// False for ideals: their elements are measured in the unitization.
  bool unital() const noexcept;
  Tower with_unital(bool unital) const;
  Tower with_name(std::string name) const;

  /// min(horizon, depth) for finite towers, horizon otherwise.
  Level effective_horizon(Level horizon) const;

  BlockAlgebra level(Level p) const;
  BlockMap connecting_map(Level p) const;
  /// The composite A_q -> A_p for p <= q.
  BlockMap composite_map(Level p, Level q) const;

  bool commutative_up_to(Level horizon) const;

  Tower truncated(Level depth) const;
  /// New level k is old level old_level_of(k); old_level_of must be
  /// nondecreasing. Used for refinements and cofinal subsequences.
  Tower reindexed(std::function<Level(Level)> old_level_of, std::optional<Level> depth) const;

  /// Identity of the underlying tower object.
  bool same_as(const Tower& other) const noexcept { return impl_ == other.impl_; }

 private:
  struct Impl;
  explicit Tower(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  Level clamp(Level p) const;

  std::shared_ptr<const Impl> impl_;
};

/// Level k is M_{n(1)} (+) ... (+) M_{n(k)}; the connecting maps delete the
/// last block. With a horizon the tower stops there, without it it is the
/// full infinite product.
Tower make_product_tower(std::function<std::size_t(Level)> block_size_rule, Level horizon);
Tower make_product_tower(std::function<std::size_t(Level)> block_size_rule);

struct Certificate {
  double value = 0.0;
  std::string reason;
  /// When false, `value` is only an upper bound.
  bool exact = true;
};

/// Facts about an element that cannot be read off a finite truncation.
struct ElementProperties {
  std::optional<Certificate> norm;
  std::optional<Certificate> spectral_radius;
  bool selfadjoint = false;
  bool normal = false;
};

/// A compatible family (a_p) with pi_{p,p+1}(a_{p+1}) = a_p.
///
/// Elements are either explicit finite lists (a data horizon; projecting
/// past it is a TruncationError) or pure generator rules. Rules may be given
/// per level or per block; per-block rules let the calculus touch only the
/// blocks that are new at each level.
class CoherentElement {
 public:
  using LevelRule = std::function<AlgebraElement(Level)>;
  using BlockRule = std::function<Matrix(Level, std::size_t)>;

  static CoherentElement from_levels(Tower tower, std::vector<AlgebraElement> levels);
  static CoherentElement from_level_rule(Tower tower, LevelRule rule);
  static CoherentElement from_block_rule(Tower tower, BlockRule rule);
  /// a_p = pi_{p,top}(x) for p <= top; top is the data horizon.
  static CoherentElement from_top(Tower tower, Level top, AlgebraElement x);
  static CoherentElement scalar(Tower tower, Complex value);
  static CoherentElement zero(Tower tower);

  const Tower& tower() const noexcept { return tower_; }
  std::optional<Level> data_horizon() const noexcept { return data_horizon_; }
  /// The largest level <= horizon that can be materialized.
  Level available(Level horizon) const;

  AlgebraElement project(Level p) const;
  Matrix block(Level p, std::size_t j) const;

  const ElementProperties& properties() const noexcept { return properties_; }
  CoherentElement with_properties(ElementProperties properties) const;
  double coherence_tol() const noexcept { return coherence_tol_; }
  CoherentElement with_coherence_tol(double tol) const;
  const std::string& label() const noexcept { return label_; }
  CoherentElement with_label(std::string label) const;

  CoherentElement adjoint() const;
  CoherentElement scaled(Complex factor) const;
  /// Levelwise, blockwise transformation f(level, block index, a_{p,j}).
  CoherentElement map_blocks(std::function<Matrix(Level, std::size_t, const Matrix&)> f) const;

  friend CoherentElement operator+(const CoherentElement& a, const CoherentElement& b);
  friend CoherentElement operator-(const CoherentElement& a, const CoherentElement& b);
  friend CoherentElement operator*(const CoherentElement& a, const CoherentElement& b);

 private:
  CoherentElement(Tower tower, LevelRule level, BlockRule block, std::optional<Level> data_horizon);
  Level resolve(Level p) const;
  static CoherentElement combine(const CoherentElement& a, const CoherentElement& b,
                                 std::function<Matrix(const Matrix&, const Matrix&)> op);

  Tower tower_;
  LevelRule level_;
  BlockRule block_;
  std::optional<Level> data_horizon_;
  ElementProperties properties_;
  double coherence_tol_ = defaults::kCoherenceTol;
  std::string label_;
};

inline AlgebraElement project(const CoherentElement& e, Level p) { return e.project(p); }

struct CoherenceResidual {
  Level level = 0;
  double residual = 0.0;
  double bound = 0.0;
  bool pass = true;
};

struct CoherenceReport {
  std::vector<CoherenceResidual> levels;
  bool pass = true;
};

/// Residuals ||pi_{p,p+1}(a_{p+1}) - a_p|| for p < up_to, each checked against
/// coherence_tol * max(1, ||a_{p+1}||).
CoherenceReport check_coherence(const CoherentElement& e, Level up_to);

}  // namespace procstar
