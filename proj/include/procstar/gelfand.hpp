#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "procstar/random.hpp"
#include "procstar/tower.hpp"

namespace procstar {

/// A character of a commutative tower, named by the level where it first
/// appears and its block there. Blocks are 1x1, so the character is
/// a -> a_{birth, block}.
struct Character {
  Level birth = 0;
  std::size_t block = 0;
};

/// Delta(A) materialized up to a horizon, with the family Phi(A) = {Delta(A_p)}.
class CharacterSpace {
 public:
  const Tower& tower() const noexcept { return tower_; }
  Level horizon() const noexcept { return horizon_; }
  const std::vector<Character>& points() const noexcept { return points_; }
  /// Point ids of Delta(A_p), indexed by block of A_p.
  const std::vector<std::size_t>& level_points(Level p) const;
  /// Delta(A_p) -> Delta(A_{p+1}): block j of A_p to the block of A_{p+1} it is read from.
  std::vector<std::size_t> injection(Level p) const;

 private:
  friend CharacterSpace character_space(const Tower& tower, Level horizon);
  CharacterSpace(Tower tower, Level horizon) : tower_(std::move(tower)), horizon_(horizon) {}

  Tower tower_;
  Level horizon_;
  std::vector<Character> points_;
  std::vector<std::vector<std::size_t>> level_points_;
};

/// PreconditionError unless every block up to the horizon is 1x1.
CharacterSpace character_space(const Tower& tower, Level horizon);

/// rho -> rho(a), one value per point of the character space.
struct GelfandTransform {
  std::vector<Complex> values;
};

GelfandTransform evaluation_iso(const CharacterSpace& space, const CoherentElement& e);
/// The element of A whose transform is `values`.
CoherentElement inverse_transform(const CharacterSpace& space, const std::vector<Complex>& values);

/// A countable set X with a chain F_1, F_2, ... of finite subsets covering it.
class CoveredSpace {
 public:
  using MemberRule = std::function<std::vector<std::size_t>(Level)>;

  /// Finite X; chain[k] lists the point ids of F_{k+1}. StructuralError when
  /// the members are not nested or do not cover X.
  CoveredSpace(std::vector<std::string> points, std::vector<std::vector<std::size_t>> chain);
  /// Infinite X = {0, 1, 2, ...}; nesting is checked when levels are built.
  static CoveredSpace countable(MemberRule members, std::function<std::string(std::size_t)> name = {});
  /// F_k = {0, ..., k-1}.
  static CoveredSpace initial_segments(std::optional<Level> depth = std::nullopt);

  std::optional<Level> depth() const noexcept { return depth_; }
  /// F_k, constant past the depth.
  std::vector<std::size_t> member(Level k) const;
  std::string point_name(std::size_t id) const;

 private:
  CoveredSpace(MemberRule members, std::function<std::string(std::size_t)> name, std::optional<Level> depth);

  MemberRule members_;
  std::function<std::string(std::size_t)> name_;
  std::optional<Level> depth_;
};

/// C_F(X): level k is the algebra of functions on F_k, one 1x1 block per
/// point in member order; connecting maps restrict to the smaller member.
Tower cf_algebra(const CoveredSpace& space);
/// The element of cf_algebra(space) given by a function on X.
CoherentElement cf_function(const Tower& cf, const CoveredSpace& space, std::function<Complex(std::size_t)> f);
/// (Delta(A), Phi(A)) as a covered space; point ids are character ids.
CoveredSpace covered_space_of(const CharacterSpace& space);

struct GelfandReport {
  std::size_t points = 0;
  /// x -> ev_x is a bijection X -> Delta(C_F(X)) on materialized points.
  bool bijection = false;
  /// Phi(C_F(X)) and F agree member by member.
  bool family_recovered = false;
  /// A -> C(Delta(A)) -> A on random probes.
  double algebra_residual = 0.0;
  /// Functions on X pulled back through the bijection.
  double function_residual = 0.0;
  /// ev(ab) = ev(a) ev(b), ev(a*) = conj ev(a), ev(a + b) = ev(a) + ev(b).
  double homomorphism_residual = 0.0;
  /// p(a) against max over Delta(A_p) of |ev(a)|.
  double seminorm_residual = 0.0;
  bool pass = false;
};

GelfandReport duality_roundtrip(const CoveredSpace& space, Level horizon, std::size_t probes, Rng& rng,
                                double tol = defaults::kGelfandTol);
GelfandReport duality_roundtrip(const Tower& tower, Level horizon, std::size_t probes, Rng& rng,
                                double tol = defaults::kGelfandTol);

}  // namespace procstar
