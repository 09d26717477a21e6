#include "procstar/ideal.hpp"

#include <algorithm>

namespace procstar {

namespace {

std::vector<std::size_t> positions(const std::vector<bool>& selection, bool wanted) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < selection.size(); ++j) {
    if (selection[j] == wanted) out.push_back(j);
  }
  return out;
}

/// index_of[j] = position of block j in `kept`, or npos.
std::vector<std::size_t> inverse_positions(const std::vector<std::size_t>& kept, std::size_t blocks) {
  std::vector<std::size_t> out(blocks, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < kept.size(); ++i) out[kept[i]] = i;
  return out;
}

BlockAlgebra sub_algebra(const BlockAlgebra& algebra, const std::vector<std::size_t>& kept) {
  std::vector<std::size_t> sizes;
  sizes.reserve(kept.size());
  for (std::size_t j : kept) sizes.push_back(algebra.block_size(j));
  return BlockAlgebra(std::move(sizes));
}

/// Selection at level p, validated against the block count and, for p
/// above 1, against the connecting map into level p - 1.
struct CheckedSelector {
  Tower tower;
  BlockSelector selector;

  std::vector<bool> raw(Level p) const {
    const BlockAlgebra algebra = tower.level(p);
    std::vector<bool> sel = selector(p, algebra);
    if (sel.size() != algebra.block_count()) {
      throw StructuralError("block selector at level " + std::to_string(p) + " has " + std::to_string(sel.size()) +
                            " entries for " + std::to_string(algebra.block_count()) + " blocks");
    }
    return sel;
  }

  void check_map(Level p) const {
    const auto lower = raw(p);
    const auto upper = raw(p + 1);
    const BlockMap map = tower.connecting_map(p);
    for (std::size_t j = 0; j < map.assignments().size(); ++j) {
      if (lower[j] != upper[*map.assignments()[j].source]) {
        throw StructuralError("block selector is not coherent at level " + std::to_string(p) + ": block " +
                              std::to_string(j) + " and its source disagree");
      }
    }
  }

  std::vector<bool> operator()(Level p) const {
    if (p > 1 && !(tower.depth() && p > *tower.depth())) check_map(p - 1);
    return raw(p);
  }
};

}  // namespace

BlockSelector select_blocks(std::vector<std::size_t> blocks) {
  return [blocks](Level, const BlockAlgebra& algebra) {
    std::vector<bool> sel(algebra.block_count(), false);
    for (std::size_t j : blocks) {
      if (j < sel.size()) sel[j] = true;
    }
    return sel;
  };
}

BlockSelector select_none() {
  return [](Level, const BlockAlgebra& algebra) { return std::vector<bool>(algebra.block_count(), false); };
}

BlockSelector select_all() {
  return [](Level, const BlockAlgebra& algebra) { return std::vector<bool>(algebra.block_count(), true); };
}

BlockSelector kernel_selector(const Tower& tower, Level p) {
  return [tower, p](Level q, const BlockAlgebra& algebra) {
    std::vector<bool> sel(algebra.block_count(), false);
    if (q <= p) return sel;
    for (std::size_t j : tower.composite_map(p, q).unassigned_sources()) sel[j] = true;
    return sel;
  };
}

IdealDecomposition closed_ideal(const Tower& tower, BlockSelector selector, Level horizon) {
  const CheckedSelector checked{tower, selector};
  const Level top = tower.effective_horizon(horizon);
  bool everything = true;
  for (Level p = 1; p <= top; ++p) {
    const auto sel = checked(p);
    everything = everything && std::all_of(sel.begin(), sel.end(), [](bool b) { return b; });
  }

  auto part = [tower, checked](bool wanted, const std::string& suffix) {
    auto levels = [tower, checked, wanted](Level p) {
      return sub_algebra(tower.level(p), positions(checked(p), wanted));
    };
    auto maps = [tower, checked, wanted](Level p) {
      const auto lower = positions(checked(p), wanted);
      const auto upper_sel = checked(p + 1);
      const auto upper = positions(upper_sel, wanted);
      const auto index_of = inverse_positions(upper, upper_sel.size());
      const BlockMap map = tower.connecting_map(p);
      std::vector<BlockMap::Assignment> assignments;
      assignments.reserve(lower.size());
      for (std::size_t j : lower) {
        const auto& a = map.assignments()[j];
        assignments.push_back({index_of[*a.source], a.conjugator});
      }
      return BlockMap(sub_algebra(tower.level(p + 1), upper), sub_algebra(tower.level(p), lower),
                      std::move(assignments));
    };
    return Tower::lazy(levels, maps, tower.depth(), tower.name() + suffix);
  };

  Tower ideal = part(true, "/ideal");
  if (!everything) ideal = ideal.with_unital(false);
  const Tower quotient = part(false, "/quotient");

  // Embeds the blocks picked by `wanted` back into A.
  auto embedding = [tower, checked](const Tower& from, bool wanted, std::string name) {
    return TowerHomomorphism(
        from, tower,
        [tower, checked, from, wanted](Level p) {
          const auto sel = checked(p);
          const auto index_of = inverse_positions(positions(sel, wanted), sel.size());
          std::vector<BlockMap::Assignment> assignments(sel.size());
          for (std::size_t j = 0; j < sel.size(); ++j) {
            if (sel[j] == wanted) assignments[j].source = index_of[j];
          }
          return BlockMap(from.level(p), tower.level(p), std::move(assignments));
        },
        std::move(name));
  };

  TowerHomomorphism quotient_map(
      tower, quotient,
      [tower, checked](Level p) { return BlockMap::keep_blocks(tower.level(p), positions(checked(p), false)); },
      "q");

  return IdealDecomposition{ideal, quotient, embedding(ideal, true, "incl"), std::move(quotient_map),
                            embedding(quotient, false, "section"), std::move(selector)};
}

}  // namespace procstar
