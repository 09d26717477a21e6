#pragma once

#include <functional>
#include <vector>

#include "procstar/homomorphism.hpp"

namespace procstar {

/// Per-level choice of blocks: selector(p, algebra)[j] says whether block j
/// of A_p belongs to the ideal.
using BlockSelector = std::function<std::vector<bool>(Level, const BlockAlgebra&)>;

/// The same block indices at every level (indices past the block count are ignored).
BlockSelector select_blocks(std::vector<std::size_t> blocks);
BlockSelector select_none();
BlockSelector select_all();
/// The blocks that make up ker(pi_p): at level q > p, the blocks the
/// composite map onto A_p deletes; nothing at q <= p.
BlockSelector kernel_selector(const Tower& tower, Level p);

/// The closed ideal I given by a block selection, the quotient A/I, and the
/// maps of the short exact sequence 0 -> I -> A -> A/I -> 0.
struct IdealDecomposition {
  Tower ideal;
  Tower quotient;
  TowerHomomorphism inclusion;
  TowerHomomorphism quotient_map;
  /// The complementary ideal embedded in A; a norm-preserving section of quotient_map.
  TowerHomomorphism section;
  BlockSelector selector;
};

/// The selector must be coherent: connecting maps carry selected blocks to
/// selected blocks. It is verified eagerly up to `horizon` (StructuralError
/// naming the first bad level) and lazily beyond it.
IdealDecomposition closed_ideal(const Tower& tower, BlockSelector selector,
                                Level horizon = 64);

}  // namespace procstar
