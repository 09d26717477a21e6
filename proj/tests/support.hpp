#pragma once

// Reference computations that do not go through the library's shortcuts:
// dense SVDs and eigensolvers on the full block-diagonal matrix, and
// Eigen's Pade-based matrix exponential.

#include <algorithm>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "procstar/block_algebra.hpp"
#include "procstar/generators.hpp"
#include "procstar/random.hpp"

namespace oracle {

using procstar::AlgebraElement;
using procstar::Complex;
using procstar::Matrix;

inline double norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline double norm(const AlgebraElement& x) { return x.block_count() == 0 ? 0.0 : norm(x.dense()); }

inline std::vector<Complex> eigenvalues(const Matrix& m) {
  Eigen::ComplexEigenSolver<Matrix> solver(m, false);
  std::vector<Complex> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

inline double spectral_radius(const Matrix& m) {
  double r = 0.0;
  for (Complex z : eigenvalues(m)) r = std::max(r, std::abs(z));
  return r;
}

/// e^{i t h} by scaling and squaring with a Pade approximant.
inline Matrix exp_i(const Matrix& h, double t = 1.0) {
  const Matrix arg = Complex(0.0, t) * h;
  return arg.exp();
}

inline std::size_t rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Matrix> lu(m);
  lu.setThreshold(1e-10);
  return static_cast<std::size_t>(lu.rank());
}

inline double distance_to_nearest(Complex z, const std::vector<Complex>& set) {
  double best = std::numeric_limits<double>::infinity();
  for (Complex w : set) best = std::min(best, std::abs(z - w));
  return best;
}

}  // namespace oracle
