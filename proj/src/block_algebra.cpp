#include "procstar/block_algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace procstar {

std::string format_complex(Complex z) {
  std::ostringstream out;
  out.precision(17);
  out << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return out.str();
}

BlockAlgebra::BlockAlgebra(std::vector<std::size_t> block_sizes) : sizes_(std::move(block_sizes)) {
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] == 0) {
      throw StructuralError("block " + std::to_string(i) + " has size 0");
    }
  }
}

std::size_t BlockAlgebra::block_size(std::size_t block) const {
  if (block >= sizes_.size()) {
    throw StructuralError("block index " + std::to_string(block) + " out of range (" +
                          std::to_string(sizes_.size()) + " blocks)");
  }
  return sizes_[block];
}

bool BlockAlgebra::commutative() const noexcept {
  return std::all_of(sizes_.begin(), sizes_.end(), [](std::size_t n) { return n == 1; });
}

std::size_t BlockAlgebra::dimension() const noexcept {
  return std::accumulate(sizes_.begin(), sizes_.end(), std::size_t{0},
                         [](std::size_t acc, std::size_t n) { return acc + n * n; });
}

std::size_t BlockAlgebra::offset(std::size_t block) const {
  std::size_t result = 0;
  for (std::size_t i = 0; i < block; ++i) result += block_size(i) * block_size(i);
  return result;
}

AlgebraElement::AlgebraElement(BlockAlgebra algebra, std::vector<Matrix> blocks)
    : algebra_(std::move(algebra)), blocks_(std::move(blocks)) {
  if (blocks_.size() != algebra_.block_count()) {
    throw StructuralError("element has " + std::to_string(blocks_.size()) + " blocks, algebra has " +
                          std::to_string(algebra_.block_count()));
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const auto n = static_cast<Eigen::Index>(algebra_.block_size(i));
    if (blocks_[i].rows() != n || blocks_[i].cols() != n) {
      throw StructuralError("block " + std::to_string(i) + " is " + std::to_string(blocks_[i].rows()) + "x" +
                            std::to_string(blocks_[i].cols()) + ", expected " + std::to_string(n) + "x" +
                            std::to_string(n));
    }
  }
}

AlgebraElement AlgebraElement::zero(const BlockAlgebra& algebra) { return scalar(algebra, 0.0); }

AlgebraElement AlgebraElement::identity(const BlockAlgebra& algebra) { return scalar(algebra, 1.0); }

AlgebraElement AlgebraElement::scalar(const BlockAlgebra& algebra, Complex value) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra.block_count());
  for (std::size_t n : algebra.block_sizes()) {
    const auto size = static_cast<Eigen::Index>(n);
    blocks.push_back(value * Matrix::Identity(size, size));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

AlgebraElement AlgebraElement::from_vector(const BlockAlgebra& algebra, const Vector& coordinates) {
  if (static_cast<std::size_t>(coordinates.size()) != algebra.dimension()) {
    throw StructuralError("coordinate vector has length " + std::to_string(coordinates.size()) +
                          ", algebra dimension is " + std::to_string(algebra.dimension()));
  }
  std::vector<Matrix> blocks;
  blocks.reserve(algebra.block_count());
  Eigen::Index offset = 0;
  for (std::size_t n : algebra.block_sizes()) {
    const auto size = static_cast<Eigen::Index>(n);
    blocks.push_back(Eigen::Map<const Matrix>(coordinates.data() + offset, size, size));
    offset += size * size;
  }
  return AlgebraElement(algebra, std::move(blocks));
}

const Matrix& AlgebraElement::block(std::size_t i) const {
  if (i >= blocks_.size()) throw StructuralError("block index " + std::to_string(i) + " out of range");
  return blocks_[i];
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> blocks;
  blocks.reserve(blocks_.size());
  for (const auto& b : blocks_) blocks.push_back(b.adjoint());
  return AlgebraElement(algebra_, std::move(blocks));
}

Vector AlgebraElement::vectorize() const {
  Vector out(static_cast<Eigen::Index>(algebra_.dimension()));
  Eigen::Index offset = 0;
  for (const auto& b : blocks_) {
    out.segment(offset, b.size()) = Eigen::Map<const Vector>(b.data(), b.size());
    offset += b.size();
  }
  return out;
}

Matrix AlgebraElement::dense() const {
  Eigen::Index order = 0;
  for (const auto& b : blocks_) order += b.rows();
  Matrix out = Matrix::Zero(order, order);
  Eigen::Index at = 0;
  for (const auto& b : blocks_) {
    out.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return out;
}

void AlgebraElement::require_same_algebra(const AlgebraElement& other, const char* op) const {
  if (!(algebra_ == other.algebra_)) {
    throw StructuralError(std::string("operands of ") + op + " live in different algebras");
  }
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_algebra(other, "+");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_algebra(other, "-");
  for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex factor) {
  for (auto& b : blocks_) b *= factor;
  return *this;
}

AlgebraElement operator*(const AlgebraElement& lhs, const AlgebraElement& rhs) {
  lhs.require_same_algebra(rhs, "*");
  std::vector<Matrix> blocks;
  blocks.reserve(lhs.blocks_.size());
  for (std::size_t i = 0; i < lhs.blocks_.size(); ++i) blocks.push_back(lhs.blocks_[i] * rhs.blocks_[i]);
  return AlgebraElement(lhs.algebra_, std::move(blocks));
}

AlgebraElement AlgebraElement::operator-() const {
  AlgebraElement out = *this;
  out *= -1.0;
  return out;
}

}  // namespace procstar
