#include "procstar/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace procstar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Complex integer_power(Complex z, unsigned k) {
  Complex out = 1.0;
  for (unsigned i = 0; i < k; ++i) out *= z;
  return out;
}

}  // namespace

bool Polynomial::holomorphic() const {
  return std::all_of(terms.begin(), terms.end(), [](const Term& t) { return t.conj_power == 0; });
}

unsigned Polynomial::degree() const {
  unsigned d = 0;
  for (const auto& t : terms) d = std::max(d, t.z_power + t.conj_power);
  return d;
}

void validate(const FunctionDescriptor& f) {
  std::visit(Overloaded{
                 [](const Polynomial&) {},
                 [](const RationalFn& r) {
                   if (r.n < 1) throw PreconditionError("rational f_n requires n >= 1");
                 },
                 [](const PrincipalArg& a) {
                   if (!std::isfinite(a.branch_angle)) throw PreconditionError("branch angle must be finite");
                 },
                 [](const ExpI& e) {
                   if (!std::isfinite(e.t)) throw PreconditionError("exponential scale must be finite");
                 },
                 [](const Tabulated& t) {
                   if (t.grid.size() < 2 || t.grid.size() != t.values.size()) {
                     throw PreconditionError("tabulated function needs >= 2 samples and matching values");
                   }
                   for (std::size_t i = 1; i < t.grid.size(); ++i) {
                     if (!(t.grid[i] > t.grid[i - 1])) {
                       throw PreconditionError("tabulated grid must be strictly increasing");
                     }
                   }
                 },
             },
             f);
}

double branch_arg(Complex z, double branch_angle) {
  const double lower = branch_angle - kTwoPi;
  double shifted = std::fmod(std::arg(z) - lower, kTwoPi);
  if (shifted <= 0.0) shifted += kTwoPi;
  return lower + shifted;
}

double arc_distance_to_ray(Complex z, double angle) {
  double diff = std::fmod(std::abs(std::arg(z) - angle), kTwoPi);
  return std::min(diff, kTwoPi - diff);
}

Complex evaluate(const FunctionDescriptor& f, Complex z, double tol) {
  return std::visit(
      Overloaded{
          [&](const Polynomial& p) {
            Complex sum = 0.0;
            for (const auto& t : p.terms) {
              sum += t.coefficient * integer_power(z, t.z_power) * integer_power(std::conj(z), t.conj_power);
            }
            return sum;
          },
          [&](const RationalFn& r) {
            const double n2 = static_cast<double>(r.n) * r.n;
            const Complex denominator = n2 + z * z;
            if (std::abs(denominator) <= tol * n2) {
              throw DomainError("f_" + std::to_string(r.n) + " has a pole at " + format_complex(z), {z});
            }
            return n2 * z / denominator;
          },
          [&](const PrincipalArg& a) {
            if (std::abs(z) <= tol) throw DomainError("arg is undefined at 0", {z});
            if (arc_distance_to_ray(z, a.branch_angle) <= tol) {
              throw DomainError("point " + format_complex(z) + " lies on the branch ray", {z});
            }
            return Complex(branch_arg(z, a.branch_angle), 0.0);
          },
          [&](const ExpI& e) { return std::exp(Complex(0.0, e.t) * z); },
          [&](const Tabulated& t) {
            if (std::abs(z.imag()) > tol || z.real() < t.grid.front() - tol || z.real() > t.grid.back() + tol) {
              throw DomainError("point " + format_complex(z) + " is outside the tabulated interval", {z});
            }
            const double x = std::clamp(z.real(), t.grid.front(), t.grid.back());
            auto upper = std::upper_bound(t.grid.begin(), t.grid.end(), x);
            if (upper == t.grid.end()) return t.values.back();
            const auto i = static_cast<std::size_t>(upper - t.grid.begin());
            const double w = (x - t.grid[i - 1]) / (t.grid[i] - t.grid[i - 1]);
            return (1.0 - w) * t.values[i - 1] + w * t.values[i];
          },
      },
      f);
}

bool is_algebraic(const FunctionDescriptor& f) {
  if (const auto* p = std::get_if<Polynomial>(&f)) return p->holomorphic();
  return std::holds_alternative<RationalFn>(f);
}

bool preserves_selfadjoint(const FunctionDescriptor& f) {
  return std::visit(Overloaded{
                        [](const Polynomial& p) {
                          return std::all_of(p.terms.begin(), p.terms.end(), [](const Polynomial::Term& t) {
                            return t.coefficient.imag() == 0.0;
                          });
                        },
                        [](const RationalFn&) { return true; },
                        [](const PrincipalArg&) { return true; },
                        [](const ExpI&) { return false; },
                        [](const Tabulated& t) {
                          return std::all_of(t.values.begin(), t.values.end(),
                                             [](Complex v) { return v.imag() == 0.0; });
                        },
                    },
                    f);
}

std::string describe(const FunctionDescriptor& f) {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{
                 [&](const Polynomial& p) {
                   out << "polynomial(";
                   for (std::size_t i = 0; i < p.terms.size(); ++i) {
                     const auto& t = p.terms[i];
                     if (i) out << " + ";
                     out << "(" << format_complex(t.coefficient) << ")z^" << t.z_power << "zbar^" << t.conj_power;
                   }
                   out << ")";
                 },
                 [&](const RationalFn& r) { out << "f_" << r.n; },
                 [&](const PrincipalArg& a) { out << "arg[branch=" << a.branch_angle << "]"; },
                 [&](const ExpI& e) { out << "exp(i*" << e.t << "*z)"; },
                 [&](const Tabulated& t) {
                   out << "tabulated[" << t.grid.front() << "," << t.grid.back() << ";" << t.grid.size() << "]";
                 },
             },
             f);
  return out.str();
}

}  // namespace procstar
