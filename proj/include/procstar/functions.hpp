#pragma once

#include <string>
#include <variant>
#include <vector>

#include "procstar/types.hpp"

namespace procstar {

/// sum of c * z^p * conj(z)^q.
struct Polynomial {
  struct Term {
    Complex coefficient;
    unsigned z_power = 0;
    unsigned conj_power = 0;
  };
  std::vector<Term> terms;

  static Polynomial identity() { return Polynomial{{{1.0, 1, 0}}}; }
  static Polynomial constant(Complex c) { return Polynomial{{{c, 0, 0}}}; }
  /// No conj(z) terms: the polynomial can be evaluated on any element.
  bool holomorphic() const;
  unsigned degree() const;
};

/// f_n(x) = n^2 x / (n^2 + x^2), n >= 1.
struct RationalFn {
  unsigned n = 1;
};

/// arg z with values in (branch_angle - 2pi, branch_angle].
struct PrincipalArg {
  double branch_angle = 3.14159265358979323846;
};

/// e^{i t z}.
struct ExpI {
  double t = 1.0;
};

/// Piecewise-linear interpolation of samples on an increasing real grid.
struct Tabulated {
  std::vector<double> grid;
  std::vector<Complex> values;
};

using FunctionDescriptor = std::variant<Polynomial, RationalFn, PrincipalArg, ExpI, Tabulated>;

/// Throws PreconditionError for malformed descriptors (n = 0, unsorted grid, ...).
void validate(const FunctionDescriptor& f);

/// Scalar evaluation. Throws DomainError when z is outside the domain of f;
/// `tol` widens real intervals and the exclusion zone around a branch ray.
Complex evaluate(const FunctionDescriptor& f, Complex z, double tol = 1e-10);

/// Polynomials in z alone and the f_n family, which are evaluated as matrix
/// polynomials / rational expressions and so apply to non-normal elements.
bool is_algebraic(const FunctionDescriptor& f);

/// f takes real values on real arguments.
bool preserves_selfadjoint(const FunctionDescriptor& f);

std::string describe(const FunctionDescriptor& f);

/// Principal branch helper: the value of arg z in (branch - 2pi, branch].
double branch_arg(Complex z, double branch_angle);

/// Distance on the unit circle (in radians) between the direction of z and the ray at `angle`.
double arc_distance_to_ray(Complex z, double angle);

}  // namespace procstar
