#include "procstar/tower.hpp"

#include <algorithm>
#include <limits>

#include "procstar/core.hpp"

namespace procstar {

struct Tower::Impl {
  LevelRule levels;
  MapRule maps;
  std::optional<Level> depth;
  bool unital = true;
  std::string name;
};

Tower Tower::lazy(LevelRule levels, MapRule maps, std::optional<Level> depth, std::string name) {
  if (depth && *depth == 0) throw PreconditionError("tower depth must be at least 1");
  auto impl = std::make_shared<Impl>();
  impl->levels = std::move(levels);
  impl->maps = std::move(maps);
  impl->depth = depth;
  impl->name = std::move(name);
  return Tower(std::move(impl));
}

Tower Tower::from_levels(std::vector<BlockAlgebra> levels, std::vector<BlockMap> maps, std::string name) {
  if (levels.empty()) throw PreconditionError("a tower needs at least one level");
  if (maps.size() + 1 != levels.size()) {
    throw StructuralError("a tower with " + std::to_string(levels.size()) + " levels needs " +
                          std::to_string(levels.size() - 1) + " connecting maps");
  }
  const Level depth = levels.size();
  auto shared_levels = std::make_shared<const std::vector<BlockAlgebra>>(std::move(levels));
  auto shared_maps = std::make_shared<const std::vector<BlockMap>>(std::move(maps));
  Tower out = lazy([shared_levels](Level p) { return (*shared_levels)[p - 1]; },
                   [shared_maps](Level p) { return (*shared_maps)[p - 1]; }, depth, std::move(name));
  // Explicit towers are validated eagerly.
  for (Level p = 1; p < depth; ++p) out.connecting_map(p);
  return out;
}

Tower Tower::single(BlockAlgebra algebra, std::string name) {
  return from_levels({std::move(algebra)}, {}, std::move(name));
}

const std::string& Tower::name() const noexcept { return impl_->name; }
std::optional<Level> Tower::depth() const noexcept { return impl_->depth; }
bool Tower::unital() const noexcept { return impl_->unital; }

Tower Tower::with_unital(bool unital) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->unital = unital;
  return Tower(std::move(impl));
}

Tower Tower::with_name(std::string name) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->name = std::move(name);
  return Tower(std::move(impl));
}

Level Tower::effective_horizon(Level horizon) const {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  return impl_->depth ? std::min(horizon, *impl_->depth) : horizon;
}

Level Tower::clamp(Level p) const {
  if (p == 0) throw PreconditionError("tower levels are numbered from 1");
  return impl_->depth ? std::min(p, *impl_->depth) : p;
}

BlockAlgebra Tower::level(Level p) const { return impl_->levels(clamp(p)); }

BlockMap Tower::connecting_map(Level p) const {
  if (p == 0) throw PreconditionError("tower levels are numbered from 1");
  if (impl_->depth && p >= *impl_->depth) return BlockMap::identity(level(p));
  BlockMap map = impl_->maps(p);
  if (!(map.source() == impl_->levels(p + 1)) || !(map.target() == impl_->levels(p))) {
    throw StructuralError("connecting map at level " + std::to_string(p) + " does not match the level algebras");
  }
  if (!map.is_surjective()) {
    throw StructuralError("connecting map at level " + std::to_string(p) + " is not surjective");
  }
  return map;
}

BlockMap Tower::composite_map(Level p, Level q) const {
  if (p > q) throw PreconditionError("composite map needs p <= q");
  BlockMap out = BlockMap::identity(level(p));
  for (Level r = p; r < q; ++r) {
    if (impl_->depth && r >= *impl_->depth) break;
    out = compose(out, connecting_map(r));
  }
  return out;
}

bool Tower::commutative_up_to(Level horizon) const {
  const Level top = effective_horizon(horizon);
  for (Level p = 1; p <= top; ++p) {
    if (!level(p).commutative()) return false;
  }
  return true;
}

Tower Tower::truncated(Level depth) const {
  const Level d = effective_horizon(depth);
  auto impl = std::make_shared<Impl>(*impl_);
  impl->depth = d;
  return Tower(std::move(impl));
}

Tower Tower::reindexed(std::function<Level(Level)> old_level_of, std::optional<Level> depth) const {
  Tower base = *this;
  auto level_rule = [base, old_level_of](Level k) { return base.level(old_level_of(k)); };
  auto map_rule = [base, old_level_of](Level k) {
    const Level lo = old_level_of(k);
    const Level hi = old_level_of(k + 1);
    if (hi < lo) throw StructuralError("reindexing must be nondecreasing");
    return base.composite_map(lo, hi);
  };
  Tower out = lazy(level_rule, map_rule, depth, impl_->name + "'");
  return out.with_unital(impl_->unital);
}

Tower make_product_tower(std::function<std::size_t(Level)> block_size_rule, Level horizon) {
  if (horizon == 0) throw PreconditionError("horizon must be at least 1");
  return make_product_tower(std::move(block_size_rule)).truncated(horizon);
}

Tower make_product_tower(std::function<std::size_t(Level)> block_size_rule) {
  auto levels = [block_size_rule](Level k) {
    std::vector<std::size_t> sizes;
    sizes.reserve(k);
    for (Level i = 1; i <= k; ++i) sizes.push_back(block_size_rule(i));
    return BlockAlgebra(std::move(sizes));
  };
  auto maps = [levels](Level k) {
    const BlockAlgebra source = levels(k + 1);
    std::vector<std::size_t> kept(k);
    for (std::size_t i = 0; i < k; ++i) kept[i] = i;
    return BlockMap::keep_blocks(source, kept);
  };
  return Tower::lazy(levels, maps, std::nullopt, "product");
}

// ---------------------------------------------------------------------------

CoherentElement::CoherentElement(Tower tower, LevelRule level, BlockRule block, std::optional<Level> data_horizon)
    : tower_(std::move(tower)), level_(std::move(level)), block_(std::move(block)), data_horizon_(data_horizon) {}

CoherentElement CoherentElement::from_levels(Tower tower, std::vector<AlgebraElement> levels) {
  if (levels.empty()) throw PreconditionError("an explicit element needs at least one level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i].algebra() == tower.level(i + 1))) {
      throw StructuralError("explicit element level " + std::to_string(i + 1) + " does not match the tower");
    }
  }
  const Level horizon = levels.size();
  auto shared = std::make_shared<const std::vector<AlgebraElement>>(std::move(levels));
  return CoherentElement(
      std::move(tower), [shared](Level p) { return (*shared)[p - 1]; },
      [shared](Level p, std::size_t j) { return (*shared)[p - 1].block(j); }, horizon);
}

CoherentElement CoherentElement::from_level_rule(Tower tower, LevelRule rule) {
  return CoherentElement(std::move(tower), std::move(rule), nullptr, std::nullopt);
}

CoherentElement CoherentElement::from_block_rule(Tower tower, BlockRule rule) {
  Tower t = tower;
  auto level = [t, rule](Level p) {
    const BlockAlgebra algebra = t.level(p);
    std::vector<Matrix> blocks;
    blocks.reserve(algebra.block_count());
    for (std::size_t j = 0; j < algebra.block_count(); ++j) blocks.push_back(rule(p, j));
    return AlgebraElement(algebra, std::move(blocks));
  };
  return CoherentElement(std::move(tower), level, std::move(rule), std::nullopt);
}

CoherentElement CoherentElement::from_top(Tower tower, Level top, AlgebraElement x) {
  const Level t = tower.effective_horizon(top);
  if (!(x.algebra() == tower.level(t))) throw StructuralError("top element does not live in level " + std::to_string(t));
  std::vector<AlgebraElement> levels;
  levels.reserve(t);
  for (Level p = 1; p <= t; ++p) levels.push_back(tower.composite_map(p, t)(x));
  return from_levels(std::move(tower), std::move(levels));
}

CoherentElement CoherentElement::scalar(Tower tower, Complex value) {
  if (!tower.unital() && value != Complex(0.0)) {
    throw PreconditionError("a non-unital tower has no nonzero scalar elements");
  }
  Tower t = tower;
  auto out = from_block_rule(std::move(tower), [t, value](Level p, std::size_t j) {
    const auto n = static_cast<Eigen::Index>(t.level(p).block_size(j));
    return Matrix(value * Matrix::Identity(n, n));
  });
  out.properties_.norm = Certificate{std::abs(value), "scalar multiple of the identity", true};
  out.properties_.spectral_radius = Certificate{std::abs(value), "scalar multiple of the identity", true};
  out.properties_.normal = true;
  out.properties_.selfadjoint = value.imag() == 0.0;
  return out;
}

CoherentElement CoherentElement::zero(Tower tower) {
  Tower t = tower;
  auto out = from_block_rule(std::move(tower), [t](Level p, std::size_t j) {
    const auto n = static_cast<Eigen::Index>(t.level(p).block_size(j));
    return Matrix(Matrix::Zero(n, n));
  });
  out.properties_.norm = Certificate{0.0, "zero element", true};
  out.properties_.spectral_radius = Certificate{0.0, "zero element", true};
  out.properties_.normal = true;
  out.properties_.selfadjoint = true;
  return out;
}

Level CoherentElement::available(Level horizon) const {
  Level h = tower_.effective_horizon(horizon);
  if (data_horizon_) h = std::min(h, *data_horizon_);
  return h;
}

Level CoherentElement::resolve(Level p) const {
  if (p == 0) throw PreconditionError("tower levels are numbered from 1");
  Level q = tower_.depth() ? std::min(p, *tower_.depth()) : p;
  if (data_horizon_ && q > *data_horizon_) {
    throw TruncationError("level " + std::to_string(p) + " is beyond the data horizon " +
                              std::to_string(*data_horizon_) + (label_.empty() ? "" : " of " + label_),
                          p);
  }
  return q;
}

AlgebraElement CoherentElement::project(Level p) const {
  const Level q = resolve(p);
  AlgebraElement out = level_(q);
  if (!(out.algebra() == tower_.level(q))) {
    throw StructuralError("generator produced an element outside level " + std::to_string(q));
  }
  return out;
}

Matrix CoherentElement::block(Level p, std::size_t j) const {
  const Level q = resolve(p);
  if (block_) return block_(q, j);
  return level_(q).block(j);
}

CoherentElement CoherentElement::with_properties(ElementProperties properties) const {
  CoherentElement out = *this;
  out.properties_ = std::move(properties);
  return out;
}

CoherentElement CoherentElement::with_coherence_tol(double tol) const {
  if (!(tol > 0.0)) throw PreconditionError("coherence tolerance must be positive");
  CoherentElement out = *this;
  out.coherence_tol_ = tol;
  return out;
}

CoherentElement CoherentElement::with_label(std::string label) const {
  CoherentElement out = *this;
  out.label_ = std::move(label);
  return out;
}

CoherentElement CoherentElement::map_blocks(std::function<Matrix(Level, std::size_t, const Matrix&)> f) const {
  const CoherentElement self = *this;
  CoherentElement out = [&] {
    if (block_) {
      return from_block_rule(tower_, [self, f](Level p, std::size_t j) { return f(p, j, self.block(p, j)); });
    }
    return from_level_rule(tower_, [self, f](Level p) {
      const AlgebraElement x = self.project(p);
      std::vector<Matrix> blocks;
      blocks.reserve(x.block_count());
      for (std::size_t j = 0; j < x.block_count(); ++j) blocks.push_back(f(p, j, x.block(j)));
      return AlgebraElement(x.algebra(), std::move(blocks));
    });
  }();
  out.data_horizon_ = data_horizon_;
  out.coherence_tol_ = coherence_tol_;
  return out;
}

CoherentElement CoherentElement::adjoint() const {
  CoherentElement out = map_blocks([](Level, std::size_t, const Matrix& m) { return Matrix(m.adjoint()); });
  out.properties_ = properties_;
  return out;
}

CoherentElement CoherentElement::scaled(Complex factor) const {
  CoherentElement out = map_blocks([factor](Level, std::size_t, const Matrix& m) { return Matrix(factor * m); });
  const double modulus = std::abs(factor);
  if (properties_.norm) {
    out.properties_.norm = Certificate{modulus * properties_.norm->value, properties_.norm->reason,
                                       properties_.norm->exact};
  }
  if (properties_.spectral_radius) {
    out.properties_.spectral_radius =
        Certificate{modulus * properties_.spectral_radius->value, properties_.spectral_radius->reason,
                    properties_.spectral_radius->exact};
  }
  out.properties_.normal = properties_.normal;
  out.properties_.selfadjoint = properties_.selfadjoint && factor.imag() == 0.0;
  return out;
}

CoherentElement CoherentElement::combine(const CoherentElement& a, const CoherentElement& b,
                                         std::function<Matrix(const Matrix&, const Matrix&)> op) {
  if (!a.tower_.same_as(b.tower_)) throw StructuralError("elements live in different towers");
  CoherentElement out = [&] {
    if (a.block_ && b.block_) {
      return from_block_rule(a.tower_, [a, b, op](Level p, std::size_t j) { return op(a.block(p, j), b.block(p, j)); });
    }
    return from_level_rule(a.tower_, [a, b, op](Level p) {
      const AlgebraElement x = a.project(p);
      const AlgebraElement y = b.project(p);
      std::vector<Matrix> blocks;
      blocks.reserve(x.block_count());
      for (std::size_t j = 0; j < x.block_count(); ++j) blocks.push_back(op(x.block(j), y.block(j)));
      return AlgebraElement(x.algebra(), std::move(blocks));
    });
  }();
  if (a.data_horizon_ || b.data_horizon_) {
    out.data_horizon_ = std::min(a.data_horizon_.value_or(std::numeric_limits<Level>::max()), b.data_horizon_.value_or(std::numeric_limits<Level>::max()));
  }
  out.coherence_tol_ = std::max(a.coherence_tol_, b.coherence_tol_);
  return out;
}

CoherentElement operator+(const CoherentElement& a, const CoherentElement& b) {
  return CoherentElement::combine(a, b, [](const Matrix& x, const Matrix& y) { return Matrix(x + y); });
}

CoherentElement operator-(const CoherentElement& a, const CoherentElement& b) {
  return CoherentElement::combine(a, b, [](const Matrix& x, const Matrix& y) { return Matrix(x - y); });
}

CoherentElement operator*(const CoherentElement& a, const CoherentElement& b) {
  return CoherentElement::combine(a, b, [](const Matrix& x, const Matrix& y) { return Matrix(x * y); });
}

CoherenceReport check_coherence(const CoherentElement& e, Level up_to) {
  if (up_to < 2) throw PreconditionError("coherence check needs up_to >= 2");
  CoherenceReport report;
  const Level top = e.available(up_to);
  if (top < 2) return report;
  AlgebraElement upper = e.project(1);
  for (Level p = 1; p < top; ++p) {
    AlgebraElement lower = std::move(upper);
    upper = e.project(p + 1);
    CoherenceResidual r;
    r.level = p;
    r.residual = cstar_norm(e.tower().connecting_map(p)(upper) - lower);
    r.bound = e.coherence_tol() * std::max(1.0, cstar_norm(upper));
    r.pass = r.residual <= r.bound;
    report.pass = report.pass && r.pass;
    report.levels.push_back(r);
  }
  return report;
}

}  // namespace procstar
