#include "procstar/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace procstar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool nearly_hermitian(const Matrix& x) {
  const double scale = x.norm();
  return (x - x.adjoint()).norm() <= 64.0 * kEps * scale;
}

bool strictly_lower_zero(const Matrix& x) {
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < x.rows(); ++i) {
      if (x(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

bool strictly_upper_zero(const Matrix& x) {
  for (Eigen::Index j = 1; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (x(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool lexicographic(Complex a, Complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

Matrix apply_diagonalized(const Matrix& block, const FunctionDescriptor& f, double tol, double scale) {
  const double mismatch = (block.adjoint() * block - block * block.adjoint()).norm();
  if (mismatch > tol * std::max(1.0, scale * scale)) {
    throw PreconditionError(describe(f) + " needs a normal element (commutator norm " + std::to_string(mismatch) + ")");
  }
  const auto diag = diagonalize_normal(block);
  if (diag.residue > std::sqrt(tol) * std::max(1.0, scale)) {
    throw PreconditionError("Schur factor of a normal block is not diagonal (residue " + std::to_string(diag.residue) +
                            ")");
  }
  Vector mapped(diag.eigenvalues.size());
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = evaluate(f, diag.eigenvalues(i), tol);
  return diag.unitary * mapped.asDiagonal() * diag.unitary.adjoint();
}

Matrix apply_block(const Matrix& block, const FunctionDescriptor& f, double tol, double scale) {
  const auto n = block.rows();
  if (const auto* p = std::get_if<Polynomial>(&f); p && p->holomorphic()) {
    const unsigned degree = p->degree();
    std::vector<Matrix> powers{Matrix::Identity(n, n)};
    for (unsigned k = 1; k <= degree; ++k) powers.push_back(powers.back() * block);
    Matrix out = Matrix::Zero(n, n);
    for (const auto& t : p->terms) out += t.coefficient * powers[t.z_power];
    return out;
  }
  if (const auto* r = std::get_if<RationalFn>(&f)) {
    const double n2 = static_cast<double>(r->n) * r->n;
    const Matrix denominator = n2 * Matrix::Identity(n, n) + block * block;
    Eigen::FullPivLU<Matrix> lu(denominator);
    if (n > 0 && lu.rcond() < 1e3 * kEps) {
      std::vector<Complex> poles;
      for (Complex z : block_eigenvalues(block)) {
        if (std::abs(n2 + z * z) <= std::sqrt(tol) * n2) poles.push_back(z);
      }
      throw DomainError("f_" + std::to_string(r->n) + " has a pole on the spectrum", poles);
    }
    return n2 * lu.solve(block);
  }
  return apply_diagonalized(block, f, tol, scale);
}

}  // namespace

double operator_norm(const Matrix& block) {
  if (block.size() == 0) return 0.0;
  // Cheap two-sided bounds first; when they agree (diagonal blocks, weighted
  // shifts, multiples of unitaries with one nonzero per row) no SVD is needed.
  const double column = block.colwise().norm().maxCoeff();
  const double row = block.rowwise().norm().maxCoeff();
  const double lower = std::max(column, row);
  const double one_norm = block.cwiseAbs().colwise().sum().maxCoeff();
  const double inf_norm = block.cwiseAbs().rowwise().sum().maxCoeff();
  const double upper = std::min(std::sqrt(one_norm * inf_norm), block.norm());
  if (upper - lower <= 4.0 * kEps * upper) return lower;
  if (block.rows() <= 16) {
    Eigen::JacobiSVD<Matrix> svd(block);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<Matrix> svd(block);
  return svd.singularValues()(0);
}

double cstar_norm(const AlgebraElement& x) {
  double out = 0.0;
  for (const auto& b : x.blocks()) out = std::max(out, operator_norm(b));
  return out;
}

std::vector<Complex> block_eigenvalues(const Matrix& block, std::size_t block_index) {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(block.rows()));
  if (strictly_lower_zero(block) || strictly_upper_zero(block)) {
    for (Eigen::Index i = 0; i < block.rows(); ++i) out.push_back(block(i, i));
    return out;
  }
  if (nearly_hermitian(block)) {
    const Matrix hermitian = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw EigensolverError("self-adjoint eigensolver did not converge on block " + std::to_string(block_index));
    }
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.emplace_back(solver.eigenvalues()(i), 0.0);
    return out;
  }
  Eigen::ComplexEigenSolver<Matrix> solver(block, false);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("complex eigensolver did not converge on block " + std::to_string(block_index));
  }
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

Spectrum cluster_points(std::span<const Complex> points, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("cluster tolerance must be positive");
  std::vector<Complex> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), lexicographic);
  DisjointSets sets(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size() && sorted[j].real() - sorted[i].real() < tol; ++j) {
      if (std::abs(sorted[j] - sorted[i]) < tol) sets.unite(i, j);
    }
  }
  std::vector<Complex> sums(sorted.size(), 0.0);
  std::vector<std::size_t> counts(sorted.size(), 0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto root = sets.find(i);
    sums[root] += sorted[i];
    ++counts[root];
  }
  Spectrum out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (counts[i] > 0) out.push_back({sums[i] / static_cast<double>(counts[i]), counts[i]});
  }
  std::sort(out.begin(), out.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return lexicographic(a.value, b.value);
  });
  return out;
}

Spectrum spectrum(const AlgebraElement& x, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw PreconditionError("cluster tolerance must be positive");
  std::vector<Complex> all;
  for (std::size_t i = 0; i < x.block_count(); ++i) {
    auto eig = block_eigenvalues(x.block(i), i);
    all.insert(all.end(), eig.begin(), eig.end());
  }
  return cluster_points(all, cluster_tol);
}

double spectral_radius(const Spectrum& s) {
  double out = 0.0;
  for (const auto& p : s) out = std::max(out, std::abs(p.value));
  return out;
}

std::vector<Complex> values(const Spectrum& s) {
  std::vector<Complex> out;
  out.reserve(s.size());
  for (const auto& p : s) out.push_back(p.value);
  return out;
}

double one_sided_distance(std::span<const Complex> from, std::span<const Complex> to) {
  double out = 0.0;
  for (Complex a : from) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Complex b : to) nearest = std::min(nearest, std::abs(a - b));
    out = std::max(out, nearest);
  }
  return out;
}

double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b) {
  return std::max(one_sided_distance(a, b), one_sided_distance(b, a));
}

bool is_normal_block(const Matrix& block, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("normality tolerance must be positive");
  const double scale = operator_norm(block);
  return operator_norm(block.adjoint() * block - block * block.adjoint()) <= tol * std::max(1.0, scale * scale);
}

bool is_normal(const AlgebraElement& x, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("normality tolerance must be positive");
  const double scale = cstar_norm(x);
  double mismatch = 0.0;
  for (const auto& b : x.blocks()) mismatch = std::max(mismatch, operator_norm(b.adjoint() * b - b * b.adjoint()));
  return mismatch <= tol * std::max(1.0, scale * scale);
}

bool is_selfadjoint(const AlgebraElement& x, double tol) {
  return cstar_norm(x - x.adjoint()) <= tol * std::max(1.0, cstar_norm(x));
}

NormalDiagonalization diagonalize_normal(const Matrix& block) {
  NormalDiagonalization out;
  if (nearly_hermitian(block)) {
    const Matrix hermitian = 0.5 * (block + block.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
    if (solver.info() != Eigen::Success) throw EigensolverError("self-adjoint eigensolver did not converge");
    out.unitary = solver.eigenvectors();
    out.eigenvalues = solver.eigenvalues().cast<Complex>();
    out.residue = 0.5 * (block - block.adjoint()).norm();
    return out;
  }
  Eigen::ComplexSchur<Matrix> schur(block);
  if (schur.info() != Eigen::Success) throw EigensolverError("complex Schur decomposition did not converge");
  const Matrix& t = schur.matrixT();
  out.unitary = schur.matrixU();
  out.eigenvalues = t.diagonal();
  out.residue = t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm();
  return out;
}

Matrix apply_function_block(const Matrix& block, const FunctionDescriptor& f, double tol) {
  validate(f);
  return apply_block(block, f, tol, operator_norm(block));
}

AlgebraElement apply_function(const AlgebraElement& x, const FunctionDescriptor& f, double tol) {
  validate(f);
  if (!is_algebraic(f) && !is_normal(x, tol)) {
    throw PreconditionError(describe(f) + " is only defined on normal elements here");
  }
  const double scale = cstar_norm(x);
  std::vector<Matrix> blocks;
  blocks.reserve(x.block_count());
  for (const auto& b : x.blocks()) blocks.push_back(apply_block(b, f, tol, scale));
  return AlgebraElement(x.algebra(), std::move(blocks));
}

AlgebraElement adjoin_unit_element(const AlgebraElement& x, Complex lambda) {
  auto sizes = x.algebra().block_sizes();
  sizes.push_back(1);
  std::vector<Matrix> blocks;
  blocks.reserve(sizes.size());
  for (const auto& b : x.blocks()) blocks.push_back(b + lambda * Matrix::Identity(b.rows(), b.cols()));
  blocks.push_back(Matrix::Constant(1, 1, lambda));
  return AlgebraElement(BlockAlgebra(std::move(sizes)), std::move(blocks));
}

std::pair<AlgebraElement, AlgebraElement> selfadjoint_parts(const AlgebraElement& x) {
  const AlgebraElement star = x.adjoint();
  AlgebraElement real_part = 0.5 * (x + star);
  AlgebraElement imag_part = Complex(0.0, -0.5) * (x - star);
  return {std::move(real_part), std::move(imag_part)};
}

}  // namespace procstar
