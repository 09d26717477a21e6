#pragma once

#include <optional>
#include <vector>

#include "procstar/block_algebra.hpp"

namespace procstar {

/// A *-homomorphism between block algebras that copies whole blocks.
///
/// Target block j is either zero or U_j x_{s(j)} U_j* for a source block s(j)
/// of the same size. A source block may feed several target blocks (diagonal
/// embeddings) or none (it lies in the kernel). Surjective maps, where s is
/// defined everywhere and injective, are exactly the connecting maps of a
/// tower: delete some blocks, conjugate the rest.
class BlockMap {
 public:
  struct Assignment {
    std::optional<std::size_t> source;
    /// Absent means the identity.
    std::optional<Matrix> conjugator;
  };

  BlockMap(BlockAlgebra source, BlockAlgebra target, std::vector<Assignment> assignments);

  static BlockMap identity(const BlockAlgebra& algebra);
  static BlockMap zero(const BlockAlgebra& source, const BlockAlgebra& target);
  /// Keep the listed source blocks, in order, with identity conjugators.
  static BlockMap keep_blocks(const BlockAlgebra& source, const std::vector<std::size_t>& kept);

  const BlockAlgebra& source() const noexcept { return source_; }
  const BlockAlgebra& target() const noexcept { return target_; }
  const std::vector<Assignment>& assignments() const noexcept { return assignments_; }

  /// Every target block has a source.
  bool is_unital() const noexcept;
  /// Unital and no source block is used twice.
  bool is_surjective() const noexcept;
  /// Source blocks that no target block reads from, ascending.
  std::vector<std::size_t> unassigned_sources() const;

  AlgebraElement operator()(const AlgebraElement& x) const;
  /// Image of target block j given the matrix of its source block.
  Matrix image_block(std::size_t target_block, const Matrix& source_block) const;

  /// A preimage that is zero on unassigned source blocks. Requires surjectivity.
  AlgebraElement lift(const AlgebraElement& y) const;

  /// The complex-linear matrix of the map in vectorized coordinates,
  /// dim(target) x dim(source).
  Matrix linear_matrix() const;

 private:
  BlockAlgebra source_;
  BlockAlgebra target_;
  std::vector<Assignment> assignments_;
};

/// outer after inner.
BlockMap compose(const BlockMap& outer, const BlockMap& inner);

}  // namespace procstar
