#pragma once

#include <cstddef>
#include <vector>

#include "procstar/types.hpp"

namespace procstar {

/// A finite-dimensional C*-algebra M_{n_1} (+) ... (+) M_{n_k}.
///
/// The empty list is the zero algebra; it appears as the ideal or quotient
/// of a block selection that picks all or none of the blocks.
class BlockAlgebra {
 public:
  BlockAlgebra() = default;
  explicit BlockAlgebra(std::vector<std::size_t> block_sizes);

  const std::vector<std::size_t>& block_sizes() const noexcept { return sizes_; }
  std::size_t block_count() const noexcept { return sizes_.size(); }
  std::size_t block_size(std::size_t block) const;

  bool is_zero() const noexcept { return sizes_.empty(); }
  bool commutative() const noexcept;
  /// Complex dimension, sum of n_i^2.
  std::size_t dimension() const noexcept;
  /// Offset of a block inside the vectorized element.
  std::size_t offset(std::size_t block) const;

  friend bool operator==(const BlockAlgebra&, const BlockAlgebra&) = default;

 private:
  std::vector<std::size_t> sizes_;
};

/// An element a_p of a BlockAlgebra, one dense matrix per block.
class AlgebraElement {
 public:
  AlgebraElement(BlockAlgebra algebra, std::vector<Matrix> blocks);

  static AlgebraElement zero(const BlockAlgebra& algebra);
  static AlgebraElement identity(const BlockAlgebra& algebra);
  static AlgebraElement scalar(const BlockAlgebra& algebra, Complex value);
  /// Inverse of vectorize().
  static AlgebraElement from_vector(const BlockAlgebra& algebra, const Vector& coordinates);

  const BlockAlgebra& algebra() const noexcept { return algebra_; }
  const std::vector<Matrix>& blocks() const noexcept { return blocks_; }
  const Matrix& block(std::size_t i) const;
  std::size_t block_count() const noexcept { return blocks_.size(); }

  AlgebraElement adjoint() const;
  /// Column-major entries of every block, concatenated in block order.
  Vector vectorize() const;
  /// The block-diagonal matrix of the whole element.
  Matrix dense() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex factor);

  friend AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs += rhs; }
  friend AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs -= rhs; }
  friend AlgebraElement operator*(AlgebraElement lhs, Complex factor) { return lhs *= factor; }
  friend AlgebraElement operator*(Complex factor, AlgebraElement rhs) { return rhs *= factor; }
  friend AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs);
  AlgebraElement operator-() const;

 private:
  void require_same_algebra(const AlgebraElement& other, const char* op) const;

  BlockAlgebra algebra_;
  std::vector<Matrix> blocks_;
};

}  // namespace procstar
