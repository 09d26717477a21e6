#include <doctest.h>

#include "procstar/bounded.hpp"
#include "procstar/core.hpp"
#include "procstar/generators.hpp"
#include "procstar/random.hpp"
#include "support.hpp"

using namespace procstar;

namespace {

/// B = M_1 (+) M_2 as a single C*-algebra, sent into the first two blocks of
/// the product tower and zero elsewhere.
TowerHomomorphism corner_embedding(const Tower& b, const Tower& a) {
  return TowerHomomorphism(b, a, [b, a](Level q) {
    const BlockAlgebra target = a.level(q);
    std::vector<BlockMap::Assignment> assignments(target.block_count());
    for (std::size_t j = 0; j < std::min<std::size_t>(2, assignments.size()); ++j) assignments[j].source = j;
    return BlockMap(b.level(q), target, std::move(assignments));
  });
}

}  // namespace

TEST_CASE("bounded_part examples") {
  Rng rng(1);
  const CoherentElement u = random_coherent(rng, matrix_product_tower(5), 5, ElementKind::Unitary);
  const auto bu = bounded_part(u, 5);
  REQUIRE(bu);
  CHECK(bu->norm == 1.0);

  CHECK_FALSE(bounded_part(superdiagonal_element(matrix_product_tower()), 200, 100));

  const auto b0 = bounded_part(CoherentElement::zero(matrix_product_tower()), 10);
  REQUIRE(b0);
  CHECK(b0->norm == 0.0);
}

TEST_CASE("apply_functor examples") {
  Rng rng(2);
  const Tower t = matrix_product_tower(4);
  const BoundedElement e = *bounded_part(random_coherent(rng, t, 4), 4);
  const BoundedElement same = apply_functor(TowerHomomorphism::identity(t), e, 4);
  CHECK(same.norm == doctest::Approx(e.norm).epsilon(1e-15));
  for (Level p = 1; p <= 4; ++p) CHECK(cstar_norm(same.element.project(p) - e.element.project(p)) == 0.0);

  // L on a three-level tower is bounded; its image at level 1 is L_1 = 0.
  const Tower t3 = matrix_product_tower(3);
  const auto l = bounded_part(superdiagonal_element(t3), 3);
  REQUIRE(l);
  CHECK(l->norm == doctest::Approx(2.0).epsilon(1e-14));
  const BoundedElement l1 = apply_functor(TowerHomomorphism::projection_to_level(t3, 1), *l, 3);
  CHECK(l1.norm == 0.0);
  CHECK(l1.element.project(1).block(0)(0, 0) == Complex(0.0));

  // Two single deletions against one double deletion.
  const IdealDecomposition a = closed_ideal(t, select_blocks({3}), 4);
  const IdealDecomposition b = closed_ideal(a.quotient, select_blocks({2}), 4);
  const IdealDecomposition direct = closed_ideal(t, select_blocks({2, 3}), 4);
  const BoundedElement twice = apply_functor(b.quotient_map, apply_functor(a.quotient_map, e, 4), 4);
  const BoundedElement once = apply_functor(direct.quotient_map, e, 4);
  const BoundedElement composed = apply_functor(compose(b.quotient_map, a.quotient_map), e, 4);
  CHECK(std::abs(twice.norm - once.norm) <= 1e-12);
  for (Level p = 1; p <= 4; ++p) {
    CHECK(cstar_norm(twice.element.project(p) - once.element.project(p)) <= 1e-12);
    CHECK(cstar_norm(composed.element.project(p) - once.element.project(p)) <= 1e-12);
  }
}

TEST_CASE("property: the bounded functor is contractive") {
  Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const Level d = 2 + rng.below(4);
    const Tower t = matrix_product_tower(d);
    const std::size_t block = rng.below(d);
    const IdealDecomposition dec = closed_ideal(t, select_blocks({block}), d);
    const BoundedElement e = *bounded_part(random_coherent(rng, t, d), d);
    const BoundedElement image = apply_functor(dec.quotient_map, e, d);
    CHECK(image.norm <= e.norm + 1e-10);
  }
}

TEST_CASE("coreflection: maps from a C*-algebra factor through the bounded part") {
  Rng rng(4);
  const Tower b = Tower::single(BlockAlgebra({1, 2}), "B");
  const Tower a = matrix_product_tower();
  const TowerHomomorphism phi = corner_embedding(b, a);
  CHECK(check_naturality(phi, 8, 10, rng).pass);
  for (int k = 0; k < 100; ++k) {
    const CoherentElement x = random_coherent(rng, b, 1);
    // Every element of a C*-algebra is bounded.
    const auto xb = bounded_part(x, 1);
    REQUIRE(xb);
    const BoundedElement image = apply_functor(phi, *xb, 8);
    CHECK(image.norm <= xb->norm + 1e-10);
    for (Level q = 1; q <= 8; ++q) {
      CHECK(cstar_norm(image.element.project(q) - phi(x).project(q)) == 0.0);
    }
  }
}

TEST_CASE("bounded part depends only on the algebra, not the chain") {
  Rng rng(5);
  const Tower t = matrix_product_tower(5);
  // The same algebras with every level repeated.
  const Tower doubled = t.reindexed([](Level k) { return (k + 1) / 2; }, 10);
  for (int k = 0; k < 30; ++k) {
    const CoherentElement e = random_coherent(rng, t, 5);
    const CoherentElement f = CoherentElement::from_level_rule(doubled, [e](Level k) { return e.project((k + 1) / 2); });
    CHECK(check_coherence(f, 10).pass);
    const auto be = bounded_part(e, 5);
    const auto bf = bounded_part(f, 10);
    REQUIRE(be);
    REQUIRE(bf);
    CHECK(std::abs(be->norm - bf->norm) <= 1e-10);
  }
  const Tower infinite = matrix_product_tower();
  const Tower slow = infinite.reindexed([](Level k) { return (k + 1) / 2; }, std::nullopt);
  const BoundednessVerdict a = uniform_norm(superdiagonal_element(infinite), 400, 50);
  const BoundednessVerdict b = uniform_norm(superdiagonal_element(slow), 400, 50);
  CHECK(a.status == Boundedness::Unbounded);
  CHECK(b.status == Boundedness::Unbounded);
  CHECK(a.value == b.value);
}

TEST_CASE("intersection law for a block subtower") {
  Rng rng(6);
  const Tower t = matrix_product_tower(6);
  const IdealDecomposition d = closed_ideal(t, select_blocks({0, 2, 4}), 6);
  for (int k = 0; k < 50; ++k) {
    const CoherentElement x = random_coherent(rng, d.ideal, 6);
    const auto in_b = bounded_part(x, 6);
    const auto in_a = bounded_part(d.inclusion(x).with_properties({}), 6);
    REQUIRE(in_b.has_value() == in_a.has_value());
    CHECK(std::abs(in_b->norm - in_a->norm) <= 1e-10);
  }
  // The same on an infinite tower: an unbounded element stays unbounded.
  const Tower inf = matrix_product_tower();
  const IdealDecomposition di = closed_ideal(inf, kernel_selector(inf, 1), 64);
  std::vector<Complex> grow;
  for (int n = 1; n <= 200; ++n) grow.emplace_back(static_cast<double>(n));
  const CoherentElement g = CoherentElement::from_block_rule(di.ideal, [](Level, std::size_t j) {
    return Matrix(Matrix::Identity(static_cast<Eigen::Index>(j + 2), static_cast<Eigen::Index>(j + 2)) * static_cast<double>(j + 1));
  });
  const BoundednessVerdict vb = uniform_norm(g, 100, 50);
  const BoundednessVerdict va = uniform_norm(di.inclusion(g), 100, 50);
  CHECK(vb.status == Boundedness::Unbounded);
  CHECK(va.status == Boundedness::Unbounded);
  CHECK(vb.value == va.value);
}

TEST_CASE("check_exactness on a block ideal sequence") {
  Rng rng(7);
  const Tower t = matrix_product_tower(5);
  const IdealDecomposition d = closed_ideal(t, select_blocks({1}), 5);
  const ExactnessReport r = check_exactness(d.inclusion, d.quotient_map, 20, 5, rng);
  CHECK(r.exact_original);
  CHECK(r.exact_bounded);
  CHECK(r.top == 5);
  REQUIRE(r.levels.size() == 5);
  CHECK(r.levels[0].kernel_dimension == 0);
  CHECK(r.levels[4].kernel_dimension == 4);
  REQUIRE(r.probes.size() == 20);
  for (const auto& probe : r.probes) {
    REQUIRE(probe.trace.size() == 50);
    CHECK(probe.kernel_norm <= 1.0 + 1e-12);
    for (std::size_t n = 1; n <= 50; ++n) {
      CHECK(probe.trace[n - 1] <= 2.0 / static_cast<double>(n * n) + 1e-9);
      if (n > 1) CHECK(probe.trace[n - 1] <= probe.trace[n - 2] + 1e-15);
    }
    CHECK(probe.final_residual <= 1e-10);
  }
}

TEST_CASE("check_exactness: identity then zero") {
  Rng rng(8);
  const Tower t = matrix_product_tower(4);
  const ExactnessReport r = check_exactness(TowerHomomorphism::identity(t), TowerHomomorphism::zero(t, t), 10, 4, rng);
  CHECK(r.exact_original);
  CHECK(r.exact_bounded);
  for (const auto& probe : r.probes) CHECK(probe.trace.back() <= 2.0 / 2500.0 + 1e-9);
}

TEST_CASE("check_exactness: image strictly inside the kernel") {
  Rng rng(9);
  const Tower c = Tower::single(BlockAlgebra({1}), "C");
  const Tower cc = Tower::single(BlockAlgebra({1, 1}), "CxC");
  const TowerHomomorphism diagonal(c, cc, [c, cc](Level) {
    return BlockMap(c.level(1), cc.level(1), {{0, std::nullopt}, {0, std::nullopt}});
  });
  const ExactnessReport r = check_exactness(diagonal, TowerHomomorphism::zero(cc, c), 10, 1, rng);
  CHECK_FALSE(r.exact_original);
  CHECK_FALSE(r.exact_bounded);
  CHECK(r.levels[0].image_rank == 1);
  CHECK(r.levels[0].kernel_dimension == 2);
  // Generic kernel elements are not reached.
  std::size_t missed = 0;
  for (const auto& probe : r.probes) missed += probe.final_residual > 1e-6;
  CHECK(missed == r.probes.size());
}

TEST_CASE("check_exactness requires beta alpha = 0") {
  Rng rng(10);
  const Tower t = matrix_product_tower(3);
  try {
    check_exactness(TowerHomomorphism::identity(t), TowerHomomorphism::identity(t), 5, 3, rng);
    FAIL("expected a precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
}

TEST_CASE("quotient_iso_check examples") {
  Rng rng(11);
  const QuotientIsoReport trivial = quotient_iso_check(matrix_product_tower(4), select_none(), 4, 50, rng);
  CHECK(trivial.pass);
  CHECK(trivial.max_residual() <= 1e-15);

  const QuotientIsoReport block1 = quotient_iso_check(matrix_product_tower(4), select_blocks({1}), 4, 50, rng);
  CHECK(block1.pass);
  CHECK(block1.max_residual() <= 1e-10);

  const QuotientIsoReport infinite = quotient_iso_check(matrix_product_tower(), select_blocks({0, 3}), 6, 20, rng);
  CHECK(infinite.pass);

  for (Level p = 1; p <= 3; ++p) {
    const SeminormQuotientReport s = seminorm_quotient_check(matrix_product_tower(5), p, 5, 50, rng);
    CHECK(s.pass);
    CHECK(s.psi_bijective);
    CHECK(s.factorization_residual <= 1e-10);
    CHECK(s.isometry_residual <= 1e-10);
    CHECK(s.quotient.max_residual() <= 1e-10);
  }
}
