#include "procstar/block_map.hpp"

#include "procstar/config.hpp"

namespace procstar {

BlockMap::BlockMap(BlockAlgebra source, BlockAlgebra target, std::vector<Assignment> assignments)
    : source_(std::move(source)), target_(std::move(target)), assignments_(std::move(assignments)) {
  if (assignments_.size() != target_.block_count()) {
    throw StructuralError("block map has " + std::to_string(assignments_.size()) + " assignments for " +
                          std::to_string(target_.block_count()) + " target blocks");
  }
  for (std::size_t j = 0; j < assignments_.size(); ++j) {
    const auto& a = assignments_[j];
    if (!a.source) {
      if (a.conjugator) throw StructuralError("target block " + std::to_string(j) + " has a conjugator but no source");
      continue;
    }
    if (*a.source >= source_.block_count()) {
      throw StructuralError("target block " + std::to_string(j) + " reads from missing source block " +
                            std::to_string(*a.source));
    }
    const auto n = target_.block_size(j);
    if (source_.block_size(*a.source) != n) {
      throw StructuralError("target block " + std::to_string(j) + " has size " + std::to_string(n) +
                            " but source block " + std::to_string(*a.source) + " has size " +
                            std::to_string(source_.block_size(*a.source)));
    }
    if (a.conjugator) {
      const auto& u = *a.conjugator;
      const auto size = static_cast<Eigen::Index>(n);
      if (u.rows() != size || u.cols() != size) {
        throw StructuralError("conjugator of target block " + std::to_string(j) + " has the wrong shape");
      }
      const double defect = (u.adjoint() * u - Matrix::Identity(size, size)).norm();
      if (defect > defaults::kConjugatorTol * std::max<double>(1.0, static_cast<double>(n))) {
        throw StructuralError("conjugator of target block " + std::to_string(j) + " is not unitary (defect " +
                              std::to_string(defect) + ")");
      }
    }
  }
}

BlockMap BlockMap::identity(const BlockAlgebra& algebra) {
  std::vector<Assignment> assignments(algebra.block_count());
  for (std::size_t j = 0; j < assignments.size(); ++j) assignments[j].source = j;
  return BlockMap(algebra, algebra, std::move(assignments));
}

BlockMap BlockMap::zero(const BlockAlgebra& source, const BlockAlgebra& target) {
  return BlockMap(source, target, std::vector<Assignment>(target.block_count()));
}

BlockMap BlockMap::keep_blocks(const BlockAlgebra& source, const std::vector<std::size_t>& kept) {
  std::vector<std::size_t> sizes;
  std::vector<Assignment> assignments;
  for (std::size_t s : kept) {
    sizes.push_back(source.block_size(s));
    assignments.push_back({s, std::nullopt});
  }
  return BlockMap(source, BlockAlgebra(std::move(sizes)), std::move(assignments));
}

bool BlockMap::is_unital() const noexcept {
  for (const auto& a : assignments_) {
    if (!a.source) return false;
  }
  return true;
}

bool BlockMap::is_surjective() const noexcept {
  if (!is_unital()) return false;
  std::vector<bool> used(source_.block_count(), false);
  for (const auto& a : assignments_) {
    if (used[*a.source]) return false;
    used[*a.source] = true;
  }
  return true;
}

std::vector<std::size_t> BlockMap::unassigned_sources() const {
  std::vector<bool> used(source_.block_count(), false);
  for (const auto& a : assignments_) {
    if (a.source) used[*a.source] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

Matrix BlockMap::image_block(std::size_t target_block, const Matrix& source_block) const {
  const auto& a = assignments_.at(target_block);
  const auto n = static_cast<Eigen::Index>(target_.block_size(target_block));
  if (!a.source) return Matrix::Zero(n, n);
  if (!a.conjugator) return source_block;
  return *a.conjugator * source_block * a.conjugator->adjoint();
}

AlgebraElement BlockMap::operator()(const AlgebraElement& x) const {
  if (!(x.algebra() == source_)) throw StructuralError("block map applied to an element of another algebra");
  std::vector<Matrix> blocks;
  blocks.reserve(assignments_.size());
  for (std::size_t j = 0; j < assignments_.size(); ++j) {
    const auto& a = assignments_[j];
    if (!a.source) {
      const auto n = static_cast<Eigen::Index>(target_.block_size(j));
      blocks.push_back(Matrix::Zero(n, n));
    } else {
      blocks.push_back(image_block(j, x.block(*a.source)));
    }
  }
  return AlgebraElement(target_, std::move(blocks));
}

AlgebraElement BlockMap::lift(const AlgebraElement& y) const {
  if (!is_surjective()) throw PreconditionError("lift requires a surjective block map");
  if (!(y.algebra() == target_)) throw StructuralError("lift applied to an element of another algebra");
  AlgebraElement out = AlgebraElement::zero(source_);
  std::vector<Matrix> blocks = out.blocks();
  for (std::size_t j = 0; j < assignments_.size(); ++j) {
    const auto& a = assignments_[j];
    blocks[*a.source] = a.conjugator ? Matrix(a.conjugator->adjoint() * y.block(j) * *a.conjugator) : y.block(j);
  }
  return AlgebraElement(source_, std::move(blocks));
}

Matrix BlockMap::linear_matrix() const {
  const auto rows = static_cast<Eigen::Index>(target_.dimension());
  const auto cols = static_cast<Eigen::Index>(source_.dimension());
  Matrix out = Matrix::Zero(rows, cols);
  for (std::size_t j = 0; j < assignments_.size(); ++j) {
    const auto& a = assignments_[j];
    if (!a.source) continue;
    const auto n = static_cast<Eigen::Index>(target_.block_size(j));
    const auto row0 = static_cast<Eigen::Index>(target_.offset(j));
    const auto col0 = static_cast<Eigen::Index>(source_.offset(*a.source));
    if (!a.conjugator) {
      out.block(row0, col0, n * n, n * n).setIdentity();
      continue;
    }
    // vec(U X U*) = (conj(U) kron U) vec(X) for column-major vec.
    const Matrix& u = *a.conjugator;
    const Matrix ubar = u.conjugate();
    for (Eigen::Index q = 0; q < n; ++q) {
      for (Eigen::Index p = 0; p < n; ++p) {
        out.block(row0 + q * n, col0 + p * n, n, n) = ubar(q, p) * u;
      }
    }
  }
  return out;
}

BlockMap compose(const BlockMap& outer, const BlockMap& inner) {
  if (!(outer.source() == inner.target())) throw StructuralError("composed block maps do not share an algebra");
  std::vector<BlockMap::Assignment> assignments;
  assignments.reserve(outer.assignments().size());
  for (const auto& a : outer.assignments()) {
    if (!a.source) {
      assignments.push_back({});
      continue;
    }
    const auto& b = inner.assignments()[*a.source];
    if (!b.source) {
      assignments.push_back({});
      continue;
    }
    std::optional<Matrix> u;
    if (a.conjugator && b.conjugator) {
      u = Matrix(*a.conjugator * *b.conjugator);
    } else if (a.conjugator) {
      u = a.conjugator;
    } else if (b.conjugator) {
      u = b.conjugator;
    }
    assignments.push_back({b.source, std::move(u)});
  }
  return BlockMap(inner.source(), outer.target(), std::move(assignments));
}

}  // namespace procstar
