#pragma once

#include <string>
#include <vector>

#include "procstar/calculus.hpp"
#include "procstar/homomorphism.hpp"

namespace procstar {

/// u*u = uu* = 1 within tol on every materialized level up to the horizon.
bool is_unitary(const CoherentElement& u, Level horizon, double tol = defaults::kUnitaryTol);

/// u with a norm certificate of 1; PreconditionError when u is not unitary.
CoherentElement certify_unitary(const CoherentElement& u, Level horizon, double tol = defaults::kUnitaryTol);

/// e^{ita}. Self-adjointness is taken from the element's properties or
/// checked up to the horizon (PreconditionError otherwise).
CoherentElement exp_selfadjoint(const CoherentElement& a, double t, Level horizon = 16,
                                double tol = defaults::kUnitaryTol);

struct LogResult {
  CoherentElement log;
  double branch_angle = 0.0;
  /// ||1 - u|| over the checked levels; below 1 is the classical sufficient condition.
  double distance_to_identity = 0.0;
  bool near_identity = false;
  /// ||e^{i log} - u|| over the checked levels.
  double reassembly_residual = 0.0;
};

/// arg(u) with values in (branch_angle - 2pi, branch_angle]. Throws
/// BranchError (eigenvalue and level) when a spectral point of some level up
/// to the horizon is within tol of the branch ray.
LogResult unitary_log(const CoherentElement& u, double branch_angle, Level horizon,
                      double tol = defaults::kUnitaryTol);

/// The midpoint of the widest arc free of the given points of the unit
/// circle, and the arc's half-width.
struct BranchChoice {
  double angle = 0.0;
  double margin = 0.0;
};
BranchChoice largest_gap_branch(const std::vector<Complex>& points);

/// u = e^{ia_1} ... e^{ia_n} with self-adjoint a_j.
struct ExpFactorization {
  CoherentElement target;
  std::vector<CoherentElement> factors;
  double residual = 0.0;
  Level horizon = 0;
  bool valid = false;
  std::string method;
};

/// Identity: no factors. Spectrum off the ray at pi: the principal log.
/// Otherwise the spectrum is rotated so that its widest gap sits at pi, and
/// u = e^{ic} e^{i log(e^{-ic} u)} with a scalar c. Valid when the
/// reassembly residual is at most 10 tol.
ExpFactorization identity_component_check(const CoherentElement& u, Level horizon,
                                          double tol = defaults::kUnitaryTol);

/// identity_component_check of the single level u_p in A_p.
ExpFactorization level_exp_factorization(const CoherentElement& u, Level p, double tol = defaults::kUnitaryTol);

/// Product of e^{i a_j} over the factors, evaluated blockwise.
CoherentElement reassemble(const ExpFactorization& factorization);

/// phi(e^{ia_j}) = e^{i phi(a_j)}: the image factorization of phi(u).
/// Requires phi to be surjective at every level up to the horizon.
ExpFactorization pushforward_exp(const TowerHomomorphism& phi, const ExpFactorization& factorization, Level horizon,
                                 double tol = defaults::kUnitaryTol);

struct PathReport {
  std::size_t samples = 0;
  /// max over sampled t, s and checked blocks of ||u(t) - u(s)|| - |t - s| ||a||.
  double lipschitz_excess = 0.0;
  double start_residual = 0.0;
  double unitarity_residual = 0.0;
  bool pass = false;
};

/// Samples t -> e^{ita} on [0, 1].
PathReport check_exp_path(const CoherentElement& a, Level horizon, std::size_t samples = defaults::kPathSamples,
                          double tol = defaults::kUnitaryTol);

}  // namespace procstar
