#pragma once

#include <cstdint>

#include "procstar/block_algebra.hpp"
#include "procstar/tower.hpp"

namespace procstar {

/// Counter-based generator: draw k of seed s is splitmix64(s + k * golden),
/// so every stream is reproducible from the 64-bit seed alone, independently
/// of the platform's <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal() noexcept;
  Complex complex_normal() noexcept;
  std::size_t below(std::size_t n) noexcept;
  /// An independent stream derived from this one.
  Rng split() noexcept { return Rng(next()); }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

Matrix random_matrix(Rng& rng, std::size_t n);
Matrix random_hermitian(Rng& rng, std::size_t n);
/// Haar-distributed unitary (QR of a complex Gaussian with phase fix).
Matrix random_unitary(Rng& rng, std::size_t n);
/// U diag(d) U* with complex Gaussian d.
Matrix random_normal_matrix(Rng& rng, std::size_t n);
/// Hermitian with spectrum inside [-radius, radius].
Matrix random_hermitian_bounded(Rng& rng, std::size_t n, double radius);

enum class ElementKind { General, Hermitian, Normal, Unitary };

AlgebraElement random_element(Rng& rng, const BlockAlgebra& algebra, ElementKind kind = ElementKind::General);

/// A random coherent element with data horizon min(horizon, depth), drawn at
/// the top level and projected down.
CoherentElement random_coherent(Rng& rng, const Tower& tower, Level horizon, ElementKind kind = ElementKind::General);

}  // namespace procstar
