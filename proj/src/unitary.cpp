#include "procstar/unitary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "procstar/core.hpp"

namespace procstar {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix identity_like(const Matrix& m) { return Matrix::Identity(m.rows(), m.cols()); }

Matrix hermitian(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

/// Largest value of `measure` over the new blocks up to the horizon.
double sup_new_blocks(const CoherentElement& e, Level horizon,
                      const std::function<double(Level, std::size_t, const Matrix&)>& measure) {
  double out = 0.0;
  scan_new_blocks(e, horizon, [&](Level p, std::size_t j, const Matrix& m) {
    out = std::max(out, measure(p, j, m));
    return true;
  });
  return out;
}

double unitarity_defect(const Matrix& m) {
  const Matrix id = identity_like(m);
  return std::max(operator_norm(m.adjoint() * m - id), operator_norm(m * m.adjoint() - id));
}

Matrix exp_i(const Matrix& hermitian_block) { return apply_function_block(hermitian_block, ExpI{1.0}); }

}  // namespace

bool is_unitary(const CoherentElement& u, Level horizon, double tol) {
  return sup_new_blocks(u, horizon, [](Level, std::size_t, const Matrix& m) { return unitarity_defect(m); }) <= tol;
}

CoherentElement certify_unitary(const CoherentElement& u, Level horizon, double tol) {
  const double defect =
      sup_new_blocks(u, horizon, [](Level, std::size_t, const Matrix& m) { return unitarity_defect(m); });
  if (defect > tol) {
    throw PreconditionError(u.label() + " is not unitary (defect " + std::to_string(defect) + ")");
  }
  ElementProperties props = u.properties();
  props.norm = Certificate{1.0, "unitary", true};
  props.spectral_radius = Certificate{1.0, "unitary", true};
  props.normal = true;
  return u.with_properties(props);
}

CoherentElement exp_selfadjoint(const CoherentElement& a, double t, Level horizon, double tol) {
  ElementProperties props = a.properties();
  if (!props.selfadjoint) {
    const double defect = sup_new_blocks(a, horizon, [](Level, std::size_t, const Matrix& m) {
      return operator_norm(m - m.adjoint()) / std::max(1.0, operator_norm(m));
    });
    if (defect > tol) {
      throw PreconditionError(a.label() + " is not self-adjoint (defect " + std::to_string(defect) + ")");
    }
    props.selfadjoint = true;
    props.normal = true;
  }
  return lift_function(a.with_properties(props), ExpI{t}, tol);
}

LogResult unitary_log(const CoherentElement& u, double branch_angle, Level horizon, double tol) {
  LogResult out{u, branch_angle};
  scan_new_blocks(u, horizon, [&](Level p, std::size_t j, const Matrix& m) {
    for (Complex z : block_eigenvalues(m, j)) {
      if (arc_distance_to_ray(z, branch_angle) <= tol) {
        throw BranchError("spectral point " + format_complex(z) + " of level " + std::to_string(p) +
                              " lies on the branch ray at angle " + std::to_string(branch_angle),
                          z, p);
      }
    }
    out.distance_to_identity = std::max(out.distance_to_identity, operator_norm(identity_like(m) - m));
    return true;
  });
  out.near_identity = branch_angle == kPi && out.distance_to_identity < 1.0;

  const PrincipalArg arg{branch_angle};
  ElementProperties props;
  props.selfadjoint = true;
  props.normal = true;
  props.norm = Certificate{std::max(std::abs(branch_angle), std::abs(branch_angle - 2.0 * kPi)),
                           "arg takes values in (branch - 2pi, branch]", false};
  out.log = u.map_blocks([arg, tol](Level, std::size_t, const Matrix& m) {
                return hermitian(apply_function_block(m, arg, tol));
              })
                .with_properties(props)
                .with_label("log(" + u.label() + ")");
  out.reassembly_residual = sup_new_blocks(out.log, horizon, [&u](Level p, std::size_t j, const Matrix& a) {
    return operator_norm(exp_i(a) - u.block(p, j));
  });
  return out;
}

BranchChoice largest_gap_branch(const std::vector<Complex>& points) {
  if (points.empty()) return {kPi, kPi};
  std::vector<double> angles;
  angles.reserve(points.size());
  for (Complex z : points) angles.push_back(std::arg(z));
  std::sort(angles.begin(), angles.end());
  BranchChoice best{angles.back() + (angles.front() + 2.0 * kPi - angles.back()) / 2.0,
                    (angles.front() + 2.0 * kPi - angles.back()) / 2.0};
  for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
    const double half = (angles[i + 1] - angles[i]) / 2.0;
    if (half > best.margin) best = {angles[i] + half, half};
  }
  if (best.angle > kPi) best.angle -= 2.0 * kPi;
  return best;
}

CoherentElement reassemble(const ExpFactorization& factorization) {
  const auto factors = factorization.factors;
  return factorization.target.map_blocks([factors](Level p, std::size_t j, const Matrix& m) {
    Matrix product = identity_like(m);
    for (const auto& a : factors) product = product * exp_i(a.block(p, j));
    return product;
  });
}

namespace {

double reassembly_residual(const ExpFactorization& f) {
  const CoherentElement product = reassemble(f);
  return sup_new_blocks(f.target, f.horizon, [&product](Level p, std::size_t j, const Matrix& m) {
    return operator_norm(product.block(p, j) - m);
  });
}

}  // namespace

ExpFactorization identity_component_check(const CoherentElement& u, Level horizon, double tol) {
  ExpFactorization out{u, {}, 0.0, 0, false, {}};
  out.horizon = u.available(horizon);
  if (!is_unitary(u, out.horizon, tol)) {
    throw PreconditionError(u.label() + " is not unitary up to level " + std::to_string(out.horizon));
  }
  struct Located {
    Complex value;
    Level level;
  };
  std::vector<Located> spectrum;
  double distance = 0.0;
  scan_new_blocks(u, out.horizon, [&](Level p, std::size_t j, const Matrix& m) {
    for (Complex z : block_eigenvalues(m, j)) spectrum.push_back({z, p});
    distance = std::max(distance, operator_norm(identity_like(m) - m));
    return true;
  });

  if (distance <= tol) {
    out.method = "identity";
  } else if (std::all_of(spectrum.begin(), spectrum.end(),
                         [tol](const Located& z) { return arc_distance_to_ray(z.value, kPi) > tol; })) {
    out.method = "principal logarithm";
    out.factors.push_back(unitary_log(u, kPi, out.horizon, tol).log);
  } else {
    std::vector<Complex> points;
    for (const auto& z : spectrum) points.push_back(z.value);
    const BranchChoice choice = largest_gap_branch(points);
    if (choice.margin <= tol) {
      const auto worst = std::min_element(spectrum.begin(), spectrum.end(), [&](const Located& a, const Located& b) {
        return arc_distance_to_ray(a.value, choice.angle) < arc_distance_to_ray(b.value, choice.angle);
      });
      throw BranchError("the spectrum of " + u.label() + " leaves no arc wider than the tolerance (" +
                            std::to_string(spectrum.size()) + " points)",
                        worst->value, worst->level);
    }
    // Rotate the widest gap onto the ray at pi, then undo the rotation with a scalar factor.
    const double c = choice.angle - kPi;
    ElementProperties scalar_props;
    scalar_props.selfadjoint = true;
    scalar_props.normal = true;
    scalar_props.norm = Certificate{std::abs(c), "scalar", true};
    const CoherentElement rotation = CoherentElement::scalar(u.tower(), c).with_properties(scalar_props);
    const CoherentElement rotated = u.scaled(std::exp(Complex(0.0, -c)));
    out.method = "rotated branch at angle " + std::to_string(choice.angle);
    out.factors.push_back(rotation);
    out.factors.push_back(unitary_log(rotated, kPi, out.horizon, tol).log);
  }
  out.residual = reassembly_residual(out);
  out.valid = out.residual <= 10.0 * tol;
  return out;
}

ExpFactorization level_exp_factorization(const CoherentElement& u, Level p, double tol) {
  const Tower single = Tower::single(u.tower().level(p), u.tower().name() + "_" + std::to_string(p));
  const CoherentElement level = CoherentElement::from_top(single, 1, u.project(p)).with_label(u.label() + "_" + std::to_string(p));
  return identity_component_check(level, 1, tol);
}

ExpFactorization pushforward_exp(const TowerHomomorphism& phi, const ExpFactorization& factorization, Level horizon,
                                 double tol) {
  if (!phi.source().same_as(factorization.target.tower())) {
    throw StructuralError("factorization does not live on the source of " + phi.name());
  }
  if (!phi.levelwise_surjective(horizon)) {
    throw PreconditionError(phi.name() + " is not surjective at every level up to " + std::to_string(horizon));
  }
  ExpFactorization out{phi(factorization.target), {}, 0.0, 0, false, {}};
  out.horizon = out.target.available(horizon);
  for (const auto& a : factorization.factors) {
    ElementProperties props;
    props.selfadjoint = true;
    props.normal = true;
    props.norm = a.properties().norm;
    out.factors.push_back(phi(a).with_properties(props));
  }
  out.method = factorization.method + ", pushed forward along " + phi.name();
  out.residual = reassembly_residual(out);
  out.valid = out.residual <= 10.0 * tol;
  return out;
}

PathReport check_exp_path(const CoherentElement& a, Level horizon, std::size_t samples, double tol) {
  if (samples < 2) throw PreconditionError("a path check needs at least two samples");
  PathReport report;
  report.samples = samples;
  double scale = 1.0;
  scan_new_blocks(a, horizon, [&](Level, std::size_t, const Matrix& m) {
    if (operator_norm(m - m.adjoint()) > tol * std::max(1.0, operator_norm(m))) {
      throw PreconditionError(a.label() + " is not self-adjoint");
    }
    const double norm = operator_norm(m);
    scale = std::max(scale, norm);
    std::vector<double> ts(samples);
    std::vector<Matrix> path(samples);
    for (std::size_t i = 0; i < samples; ++i) {
      ts[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
      path[i] = apply_function_block(m, ExpI{ts[i]});
      report.unitarity_residual = std::max(report.unitarity_residual, unitarity_defect(path[i]));
    }
    report.start_residual = std::max(report.start_residual, operator_norm(path[0] - identity_like(m)));
    for (std::size_t i = 0; i < samples; ++i) {
      for (std::size_t k = i + 1; k < samples; ++k) {
        const double excess = operator_norm(path[k] - path[i]) - (ts[k] - ts[i]) * norm;
        report.lipschitz_excess = std::max(report.lipschitz_excess, excess);
      }
    }
    return true;
  });
  const double bound = tol * scale;
  report.pass = report.lipschitz_excess <= bound && report.start_residual <= bound &&
                report.unitarity_residual <= bound;
  return report;
}

}  // namespace procstar
