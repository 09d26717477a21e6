#include "procstar/random.hpp"

#include <cmath>
#include <numbers>

namespace procstar {

namespace {

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next() noexcept {
  ++counter_;
  return splitmix64(seed_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double Rng::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() noexcept {
  // 1 - u keeps the logarithm finite.
  const double u = 1.0 - uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Complex Rng::complex_normal() noexcept {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::size_t Rng::below(std::size_t n) noexcept { return n == 0 ? 0 : static_cast<std::size_t>(next() % n); }

Matrix random_matrix(Rng& rng, std::size_t n) {
  const auto size = static_cast<Eigen::Index>(n);
  Matrix m(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    for (Eigen::Index i = 0; i < size; ++i) m(i, j) = rng.complex_normal();
  }
  return m;
}

Matrix random_hermitian(Rng& rng, std::size_t n) {
  const Matrix g = random_matrix(rng, n);
  return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(Rng& rng, std::size_t n) {
  const Matrix g = random_matrix(rng, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    const Complex d = r(i, i);
    if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

Matrix random_normal_matrix(Rng& rng, std::size_t n) {
  const Matrix u = random_unitary(rng, n);
  Vector d(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.complex_normal();
  return u * d.asDiagonal() * u.adjoint();
}

Matrix random_hermitian_bounded(Rng& rng, std::size_t n, double radius) {
  const Matrix u = random_unitary(rng, n);
  Eigen::VectorXd d(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = rng.uniform(-radius, radius);
  Matrix h = u * d.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

AlgebraElement random_element(Rng& rng, const BlockAlgebra& algebra, ElementKind kind) {
  std::vector<Matrix> blocks;
  blocks.reserve(algebra.block_count());
  for (std::size_t n : algebra.block_sizes()) {
    switch (kind) {
      case ElementKind::General: blocks.push_back(random_matrix(rng, n)); break;
      case ElementKind::Hermitian: blocks.push_back(random_hermitian(rng, n)); break;
      case ElementKind::Normal: blocks.push_back(random_normal_matrix(rng, n)); break;
      case ElementKind::Unitary: blocks.push_back(random_unitary(rng, n)); break;
    }
  }
  return AlgebraElement(algebra, std::move(blocks));
}

CoherentElement random_coherent(Rng& rng, const Tower& tower, Level horizon, ElementKind kind) {
  const Level top = tower.effective_horizon(horizon);
  auto out = CoherentElement::from_top(tower, top, random_element(rng, tower.level(top), kind));
  ElementProperties props;
  props.selfadjoint = kind == ElementKind::Hermitian;
  props.normal = kind != ElementKind::General;
  if (kind == ElementKind::Unitary) props.norm = Certificate{1.0, "unitary", true};
  return out.with_properties(props);
}

}  // namespace procstar
