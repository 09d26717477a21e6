#pragma once

#include <optional>
#include <vector>

#include "procstar/tower.hpp"

namespace procstar {

/// Level k is M_1 (+) M_2 (+) ... (+) M_k. Infinite without a depth.
Tower matrix_product_tower(std::optional<Level> depth = std::nullopt);

/// Level k is C^k (one 1x1 block per level). Infinite without a depth.
Tower commutative_product_tower(std::optional<Level> depth = std::nullopt);

/// The n x n matrix with 1, 2, ..., n-1 on the superdiagonal.
Matrix superdiagonal_shift(std::size_t n);

/// Every block of size n is superdiagonal_shift(n). Coherent on towers
/// whose connecting maps carry no conjugators. Nilpotent levelwise, so the
/// element has a spectral radius certificate of 0.
CoherentElement superdiagonal_element(const Tower& tower);

/// On a tower of 1x1 blocks: the block first appearing at level k holds
/// values[k-1]; past the table the last value repeats. Uses the block index
/// as the level of birth, which matches the product towers above.
CoherentElement diagonal_sequence(const Tower& tower, std::vector<Complex> values);

}  // namespace procstar
