#include <doctest.h>

#include <cmath>
#include <numbers>

#include "procstar/core.hpp"
#include "procstar/generators.hpp"
#include "procstar/random.hpp"
#include "support.hpp"

using namespace procstar;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

AlgebraElement single(const Matrix& m) {
  return AlgebraElement(BlockAlgebra({static_cast<std::size_t>(m.rows())}), {m});
}

AlgebraElement diag(std::vector<Complex> d) {
  std::vector<std::size_t> sizes(d.size(), 1);
  std::vector<Matrix> blocks;
  for (Complex z : d) blocks.push_back(Matrix::Constant(1, 1, z));
  return AlgebraElement(BlockAlgebra(sizes), blocks);
}

BlockAlgebra random_algebra(Rng& rng) {
  std::vector<std::size_t> sizes(1 + rng.below(3));
  for (auto& n : sizes) n = 1 + rng.below(4);
  return BlockAlgebra(sizes);
}

std::vector<Complex> sorted(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return v;
}

}  // namespace

TEST_CASE("block algebra shapes") {
  const BlockAlgebra a({1, 2, 3});
  CHECK(a.dimension() == 14);
  CHECK(a.offset(2) == 5);
  CHECK_FALSE(a.commutative());
  CHECK(BlockAlgebra({1, 1}).commutative());
  CHECK(BlockAlgebra().is_zero());
  CHECK_THROWS_AS(BlockAlgebra({2, 0}), StructuralError);
  CHECK_THROWS_AS(AlgebraElement(a, {Matrix::Zero(1, 1), Matrix::Zero(3, 3), Matrix::Zero(3, 3)}), StructuralError);
  CHECK_THROWS_AS(AlgebraElement(a, {Matrix::Zero(1, 1)}), StructuralError);
}

TEST_CASE("vectorize round trip and adjoint involution") {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const BlockAlgebra a = random_algebra(rng);
    const AlgebraElement x = random_element(rng, a);
    const AlgebraElement back = AlgebraElement::from_vector(a, x.vectorize());
    CHECK(cstar_norm(back - x) == 0.0);
    const AlgebraElement xx = x.adjoint().adjoint();
    for (std::size_t j = 0; j < x.block_count(); ++j) CHECK(xx.block(j) == x.block(j));
  }
}

TEST_CASE("mismatched algebras are rejected") {
  const AlgebraElement x = AlgebraElement::identity(BlockAlgebra({1, 2}));
  const AlgebraElement y = AlgebraElement::identity(BlockAlgebra({2, 1}));
  CHECK_THROWS_AS(x + y, StructuralError);
  CHECK_THROWS_AS(x * y, StructuralError);
}

TEST_CASE("cstar_norm examples") {
  CHECK(cstar_norm(AlgebraElement::identity(BlockAlgebra({1, 3, 2}))) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cstar_norm(AlgebraElement::zero(BlockAlgebra({2, 2}))) == 0.0);
  CHECK(cstar_norm(single(superdiagonal_shift(3))) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(operator_norm(superdiagonal_shift(3)) == doctest::Approx(oracle::norm(superdiagonal_shift(3))).epsilon(1e-14));
  CHECK(operator_norm(mat2(1, 2, 3, 4)) == doctest::Approx(5.464985704219043).epsilon(1e-14));
  CHECK(operator_norm(mat2(Complex(0, 1), 1, 0, 2)) == doctest::Approx(2.2882456112707374).epsilon(1e-14));
  // The norm of a direct sum is the largest block norm.
  const AlgebraElement x(BlockAlgebra({2, 2}), {mat2(1, 2, 3, 4), mat2(Complex(0, 1), 1, 0, 2)});
  CHECK(cstar_norm(x) == doctest::Approx(5.464985704219043).epsilon(1e-14));
}

TEST_CASE("spectrum examples") {
  auto pts = [](const AlgebraElement& x) { return values(spectrum(x)); };
  const auto one = pts(AlgebraElement::identity(BlockAlgebra({1, 2})));
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one[0] - 1.0) < 1e-14);
  CHECK(spectrum(AlgebraElement::identity(BlockAlgebra({1, 2})))[0].multiplicity == 3);

  for (std::size_t n = 1; n <= 12; ++n) {
    const auto s = pts(single(superdiagonal_shift(n)));
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0]) == 0.0);
  }

  const Matrix l4 = superdiagonal_shift(4);
  const auto s = pts(single(l4 * l4.adjoint()));
  const auto expected = sorted(oracle::eigenvalues(l4 * l4.adjoint()));
  REQUIRE(s.size() == 4);
  const double want[] = {0, 1, 4, 9};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(s[i] - want[i]) < 1e-12);
    CHECK(std::abs(s[i] - expected[i]) < 1e-12);
  }

  const Matrix h = mat2(0.5, Complex(0.2, 0.1), Complex(0.2, -0.1), -0.3);
  const auto sh = pts(single(h));
  REQUIRE(sh.size() == 2);
  CHECK(sh[0].real() == doctest::Approx(-0.358257569495584).epsilon(1e-13));
  CHECK(sh[1].real() == doctest::Approx(0.558257569495584).epsilon(1e-13));
}

TEST_CASE("clustering merges nearby points to their centroid") {
  const std::vector<Complex> points{1.0, 1.0 + 4e-9, 1.0 + 8e-9, 2.0};
  const Spectrum s = cluster_points(points, 1e-8);
  REQUIRE(s.size() == 2);
  CHECK(s[0].multiplicity == 3);
  CHECK(std::abs(s[0].value - (1.0 + 4e-9)) < 1e-15);
  CHECK(s[1].multiplicity == 1);
  CHECK(cluster_points(points, 1e-10).size() == 4);
}

TEST_CASE("is_normal examples") {
  Rng rng(3);
  CHECK(is_normal(AlgebraElement(BlockAlgebra({3}), {random_hermitian(rng, 3)})));
  CHECK_FALSE(is_normal(single(superdiagonal_shift(3))));
  CHECK(is_normal(diag({Complex(0, 1), Complex(0, -1)})));
  CHECK(is_normal(single(random_unitary(rng, 4))));
  const Matrix l3 = superdiagonal_shift(3);
  CHECK(oracle::norm(Matrix(l3.adjoint() * l3 - l3 * l3.adjoint())) > 1.0);
}

TEST_CASE("apply_function examples") {
  Rng rng(5);
  const AlgebraElement h(BlockAlgebra({3, 2}), {random_hermitian(rng, 3), random_hermitian(rng, 2)});
  const AlgebraElement e0 = apply_function(h, ExpI{0.0});
  CHECK(cstar_norm(e0 - AlgebraElement::identity(h.algebra())) < 1e-13);

  const AlgebraElement f2 = apply_function(diag({1.0, 2.0}), RationalFn{2});
  CHECK(std::abs(f2.block(0)(0, 0) - 0.8) < 1e-15);
  CHECK(std::abs(f2.block(1)(0, 0) - 1.0) < 1e-15);
  // f_n is rational, so it also applies to the non-normal shift.
  const Matrix l3 = superdiagonal_shift(3);
  const Matrix expected = 9.0 * l3 * (9.0 * Matrix::Identity(3, 3) + l3 * l3).inverse();
  CHECK(oracle::norm(Matrix(apply_function(single(l3), RationalFn{3}).block(0) - expected)) < 1e-13);

  const AlgebraElement arg = apply_function(diag({Complex(0, 1), 1.0}), PrincipalArg{});
  CHECK(std::abs(arg.block(0)(0, 0) - std::numbers::pi / 2) < 1e-15);
  CHECK(std::abs(arg.block(1)(0, 0)) < 1e-15);

  Matrix hm = mat2(0.5, Complex(0.2, 0.1), Complex(0.2, -0.1), -0.3);
  const Matrix u = apply_function(single(hm), ExpI{1.0}).block(0);
  const Matrix frozen = mat2(Complex(0.8537939965440816, 0.47375021670938827),
                             Complex(-0.11532943663961714, 0.18247099681177006),
                             Complex(0.07677913546564578, 0.20174614739875577),
                             Complex(0.9308945988920243, -0.29468407171166333));
  CHECK(oracle::norm(Matrix(u - frozen)) < 1e-13);
  CHECK(oracle::norm(Matrix(u - oracle::exp_i(hm))) < 1e-13);
}

TEST_CASE("apply_function errors") {
  CHECK_THROWS_AS(apply_function(single(superdiagonal_shift(3)), ExpI{1.0}), PreconditionError);
  try {
    apply_function(diag({-1.0, 1.0}), PrincipalArg{});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    REQUIRE(e.points().size() == 1);
    CHECK(std::abs(e.points()[0] + 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(apply_function(diag({5.0}), Tabulated{{0.0, 1.0}, {0.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(validate(RationalFn{0}), PreconditionError);
  CHECK_THROWS_AS(validate(Tabulated{{1.0, 0.0}, {0.0, 1.0}}), PreconditionError);
}

TEST_CASE("tabulated and conjugate polynomial calculus") {
  const AlgebraElement x = diag({0.25, 0.5});
  const AlgebraElement t = apply_function(x, Tabulated{{0.0, 1.0}, {0.0, 2.0}});
  CHECK(std::abs(t.block(0)(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(t.block(1)(0, 0) - 1.0) < 1e-15);
  // |z|^2 = z conj(z) on a unitary is 1.
  const Polynomial modulus{{{1.0, 1, 1}}};
  const AlgebraElement m = apply_function(diag({Complex(0.6, 0.8), Complex(0, -1)}), modulus);
  CHECK(cstar_norm(m - AlgebraElement::identity(m.algebra())) < 1e-14);
}

TEST_CASE("adjoin_unit_element examples") {
  const AlgebraElement z = adjoin_unit_element(AlgebraElement::zero(BlockAlgebra({2})), 0.0);
  CHECK(values(spectrum(z)) == std::vector<Complex>{0.0});

  const AlgebraElement a = adjoin_unit_element(diag({2.0}), 1.0);
  const auto s = values(spectrum(a));
  REQUIRE(s.size() == 2);
  CHECK(std::abs(s[0] - 1.0) < 1e-15);
  CHECK(std::abs(s[1] - 3.0) < 1e-15);

  // Adjoining a unit to an invertible element adds 0 to its spectrum.
  const AlgebraElement b = adjoin_unit_element(diag({2.0, Complex(0, 1)}), 0.0);
  const auto sb = values(spectrum(b));
  CHECK(sb.size() == 3);
  CHECK(oracle::distance_to_nearest(0.0, sb) == 0.0);
}

TEST_CASE("selfadjoint_parts examples") {
  Rng rng(8);
  const Matrix h = random_hermitian(rng, 3);
  auto [a1, a2] = selfadjoint_parts(single(h));
  CHECK(cstar_norm(a1 - single(h)) < 1e-15);
  CHECK(cstar_norm(a2) < 1e-15);

  auto [b1, b2] = selfadjoint_parts(single(Complex(0, 1) * h));
  CHECK(cstar_norm(b1) < 1e-15);
  CHECK(cstar_norm(b2 - single(h)) < 1e-15);

  const AlgebraElement l3 = single(superdiagonal_shift(3));
  auto [c1, c2] = selfadjoint_parts(l3);
  CHECK(is_selfadjoint(c1, 1e-15));
  CHECK(is_selfadjoint(c2, 1e-15));
  CHECK(cstar_norm(c1 + Complex(0, 1) * c2 - l3) <= 1e-14 * cstar_norm(l3));
}

TEST_CASE("normal diagonalization is a unitary similarity") {
  Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const Matrix m = random_normal_matrix(rng, 1 + rng.below(5));
    const NormalDiagonalization d = diagonalize_normal(m);
    const Matrix back = d.unitary * d.eigenvalues.asDiagonal() * d.unitary.adjoint();
    CHECK(oracle::norm(Matrix(back - m)) < 1e-12 * std::max(1.0, oracle::norm(m)));
    CHECK(d.residue < 1e-10);
  }
}

// Core invariants, 200 seeded instances each.

TEST_CASE("property: C*-identity") {
  Rng rng(101);
  for (int k = 0; k < 200; ++k) {
    const AlgebraElement x = random_element(rng, random_algebra(rng));
    const double n = cstar_norm(x);
    CHECK(std::abs(cstar_norm(x.adjoint() * x) - n * n) <= 1e-10 * n * n);
    CHECK(std::abs(n - oracle::norm(x)) <= 1e-12 * n);
  }
}

TEST_CASE("property: submultiplicativity") {
  Rng rng(102);
  for (int k = 0; k < 200; ++k) {
    const BlockAlgebra a = random_algebra(rng);
    const AlgebraElement x = random_element(rng, a);
    const AlgebraElement y = random_element(rng, a);
    CHECK(cstar_norm(x * y) <= cstar_norm(x) * cstar_norm(y) + 1e-10);
  }
}

TEST_CASE("property: involution is isometric") {
  Rng rng(103);
  for (int k = 0; k < 200; ++k) {
    const AlgebraElement x = random_element(rng, random_algebra(rng));
    CHECK(std::abs(cstar_norm(x.adjoint()) - cstar_norm(x)) <= 1e-12 * std::max(1.0, cstar_norm(x)));
  }
}

TEST_CASE("property: spectral mapping for polynomials on normal elements") {
  Rng rng(104);
  for (int k = 0; k < 200; ++k) {
    const AlgebraElement x = random_element(rng, random_algebra(rng), ElementKind::Normal);
    Polynomial f;
    const unsigned degree = 1 + static_cast<unsigned>(rng.below(3));
    for (unsigned d = 0; d <= degree; ++d) f.terms.push_back({0.5 * rng.complex_normal(), d, 0});
    const auto fx = values(spectrum(apply_function(x, f)));
    std::vector<Complex> mapped;
    for (Complex z : values(spectrum(x))) mapped.push_back(evaluate(f, z));
    CHECK(hausdorff_distance(fx, mapped) <= 1e-8 * std::max(1.0, spectral_radius(spectrum(apply_function(x, f)))));
  }
}

TEST_CASE("property: normal elements have norm equal to spectral radius") {
  Rng rng(105);
  for (int k = 0; k < 200; ++k) {
    const AlgebraElement x = random_element(rng, random_algebra(rng), ElementKind::Normal);
    const double r = spectral_radius(spectrum(x));
    CHECK(std::abs(cstar_norm(x) - r) <= 1e-10 * std::max(1.0, r));
    CHECK(std::abs(r - oracle::spectral_radius(x.dense())) <= 1e-10 * std::max(1.0, r));
  }
}

TEST_CASE("property: spectra agree with a dense eigensolver") {
  Rng rng(106);
  for (int k = 0; k < 200; ++k) {
    const AlgebraElement x = random_element(rng, random_algebra(rng));
    const auto ours = values(spectrum(x, 1e-12));
    const auto dense = oracle::eigenvalues(x.dense());
    CHECK(hausdorff_distance(ours, dense) <= 1e-8 * std::max(1.0, cstar_norm(x)));
  }
}
