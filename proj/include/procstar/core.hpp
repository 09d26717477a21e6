#pragma once

#include <span>
#include <utility>
#include <vector>

#include "procstar/block_algebra.hpp"
#include "procstar/config.hpp"
#include "procstar/functions.hpp"

namespace procstar {

/// Largest singular value of a single block.
double operator_norm(const Matrix& block);

/// The C*-norm of x: the maximum over blocks of the largest singular value.
double cstar_norm(const AlgebraElement& x);

/// Eigenvalues of one block. Triangular blocks (in particular nilpotent shift
/// matrices) are read off the diagonal, Hermitian blocks go through the
/// self-adjoint solver, everything else through a complex Schur solver.
std::vector<Complex> block_eigenvalues(const Matrix& block, std::size_t block_index = 0);

struct SpectralPoint {
  Complex value;
  std::size_t multiplicity = 1;
};

/// Clustered spectrum, sorted by (real, imag).
using Spectrum = std::vector<SpectralPoint>;

/// Single-linkage clustering: points closer than `tol` end up in one cluster,
/// represented by its centroid.
Spectrum cluster_points(std::span<const Complex> points, double tol);

/// Union of the block spectra of x, clustered.
Spectrum spectrum(const AlgebraElement& x, double cluster_tol = defaults::kClusterTol);

double spectral_radius(const Spectrum& s);
std::vector<Complex> values(const Spectrum& s);

/// sup over a in `from` of the distance to `to`.
double one_sided_distance(std::span<const Complex> from, std::span<const Complex> to);
double hausdorff_distance(std::span<const Complex> a, std::span<const Complex> b);

/// ||x*x - xx*|| <= tol * max(1, ||x||^2).
bool is_normal(const AlgebraElement& x, double tol = defaults::kNormalTol);
bool is_normal_block(const Matrix& block, double tol = defaults::kNormalTol);
bool is_selfadjoint(const AlgebraElement& x, double tol = defaults::kNormalTol);

/// Unitary triangularization of a normal block, x = U diag(values) U*.
struct NormalDiagonalization {
  Matrix unitary;
  Vector eigenvalues;
  /// Norm of the strictly upper triangular part of the Schur factor.
  double residue = 0.0;
};
NormalDiagonalization diagonalize_normal(const Matrix& block);

/// Blockwise functional calculus.
///
/// Holomorphic polynomials and f_n are evaluated as matrix polynomial /
/// rational expressions (no normality needed); every other descriptor goes
/// through the unitary diagonalization and requires a normal element.
AlgebraElement apply_function(const AlgebraElement& x, const FunctionDescriptor& f,
                              double tol = defaults::kNormalTol);
Matrix apply_function_block(const Matrix& block, const FunctionDescriptor& f,
                            double tol = defaults::kNormalTol);

/// The element (x, lambda) of the unitization A (+) C: blocks x_i + lambda
/// followed by a 1x1 block carrying lambda.
AlgebraElement adjoin_unit_element(const AlgebraElement& x, Complex lambda);

/// ((x + x*)/2, (x - x*)/2i).
std::pair<AlgebraElement, AlgebraElement> selfadjoint_parts(const AlgebraElement& x);

}  // namespace procstar
