#pragma once

#include <optional>
#include <string>
#include <vector>

#include "procstar/calculus.hpp"
#include "procstar/homomorphism.hpp"
#include "procstar/ideal.hpp"

namespace procstar {

/// An element of A_b together with its uniform norm.
struct BoundedElement {
  CoherentElement element;
  double norm = 0.0;
  /// False when `norm` is only an upper bound.
  bool exact = true;
};

/// The element when uniform_norm decides Bounded, nothing otherwise.
std::optional<BoundedElement> bounded_part(const CoherentElement& e, Level horizon,
                                           double threshold = defaults::kDivergenceThreshold);

/// phi_b(e). *-homomorphisms are contractive, so ||e||_inf bounds the image;
/// on a finite target the image norm is computed exactly.
BoundedElement apply_functor(const TowerHomomorphism& phi, const BoundedElement& e, Level horizon,
                             double threshold = defaults::kDivergenceThreshold);

struct LevelExactness {
  Level level = 0;
  std::size_t image_rank = 0;
  std::size_t kernel_dimension = 0;
  /// ||beta_q alpha_q|| in vectorized coordinates.
  double composite_residual = 0.0;
  bool exact = false;
};

struct ExactnessProbe {
  /// ||alpha(f_n(a)) - b||_inf for n = 1, 2, ...
  std::vector<double> trace;
  /// The same distance at n = final_n, large enough that f_n(b) is within
  /// tol of b whenever b lies in the image of alpha.
  double final_residual = 0.0;
  std::size_t final_n = 0;
  double kernel_norm = 0.0;
};

/// Exactness of A --alpha--> B --beta--> C at B.
struct ExactnessReport {
  std::vector<LevelExactness> levels;
  bool exact_original = false;
  /// ker beta_b = alpha(A_b), witnessed by the f_n approximation of every probe.
  bool exact_bounded = false;
  std::vector<ExactnessProbe> probes;
  Level top = 0;
  double tol = 0.0;
};

/// Requires beta alpha = 0 within tol (PreconditionError with the residual
/// otherwise). Kernels and images are compared levelwise by rank; then random
/// self-adjoint b in ker beta with spectrum in [-1, 1] are lifted to a
/// preimage a, and alpha(f_n(a)) = f_n(b) is tracked towards b.
ExactnessReport check_exactness(const TowerHomomorphism& alpha, const TowerHomomorphism& beta, std::size_t probes,
                                Level horizon, Rng& rng, double tol = defaults::kRankTol,
                                std::size_t trace_length = defaults::kTraceLength);

struct QuotientIsoReport {
  /// a i and i a stay in I; I is closed under *.
  double ideal_residual = 0.0;
  /// q(a + i) = q(a).
  double well_defined_residual = 0.0;
  /// q preserves products, sums and adjoints.
  double homomorphism_residual = 0.0;
  /// ||q(a)||_inf against dist(a, I_b).
  double isometry_residual = 0.0;
  /// q(section(y)) = y.
  double surjectivity_residual = 0.0;
  double max_residual() const;
  bool pass = false;
};

/// Verifies that A_b/I_b -> (A/I)_b, a + I_b -> q(a), is an isometric
/// *-isomorphism on random probes. Infinite towers are cut at the horizon.
QuotientIsoReport quotient_iso_check(const Tower& tower, const BlockSelector& selector, Level horizon,
                                     std::size_t probes, Rng& rng, double tol = defaults::kRankTol);

struct SeminormQuotientReport {
  Level p = 0;
  QuotientIsoReport quotient;
  /// psi q = pi_p where psi: (A/ker p) -> A_p is the induced isomorphism.
  double factorization_residual = 0.0;
  /// ||psi(q(a))|| = p(a) = dist(a, ker p).
  double isometry_residual = 0.0;
  bool psi_bijective = false;
  bool pass = false;
};

/// A_p = A_b/(ker p)_b for the seminorm p of level p.
SeminormQuotientReport seminorm_quotient_check(const Tower& tower, Level p, Level horizon, std::size_t probes,
                                               Rng& rng, double tol = defaults::kRankTol);

}  // namespace procstar
