#include "procstar/bounded.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "procstar/core.hpp"

namespace procstar {

std::optional<BoundedElement> bounded_part(const CoherentElement& e, Level horizon, double threshold) {
  const BoundednessVerdict verdict = uniform_norm(e, horizon, threshold);
  if (!verdict.bounded()) return std::nullopt;
  return BoundedElement{e, verdict.value, verdict.exact};
}

BoundedElement apply_functor(const TowerHomomorphism& phi, const BoundedElement& e, Level horizon,
                             double threshold) {
  CoherentElement image = phi(e.element);
  ElementProperties props;
  props.norm = Certificate{e.norm, "image of an element of norm " + std::to_string(e.norm) + " under " + phi.name(),
                           false};
  image = image.with_properties(props);
  const BoundednessVerdict verdict = uniform_norm(image, horizon, threshold);
  return BoundedElement{image, verdict.value, verdict.exact};
}

namespace {

struct Svd {
  Eigen::VectorXd singular;
  Matrix v;
};

Svd svd(const Matrix& m, bool full_v) {
  Svd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.v = Matrix::Identity(m.cols(), m.cols());
    return out;
  }
  Eigen::JacobiSVD<Matrix> solver(m, full_v ? Eigen::ComputeFullV : 0);
  out.singular = solver.singularValues();
  if (full_v) out.v = solver.matrixV();
  return out;
}

std::size_t numerical_rank(const Eigen::VectorXd& singular, double tol) {
  if (singular.size() == 0) return 0;
  const double cut = tol * std::max(1.0, singular(0));
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < singular.size(); ++i) {
    if (singular(i) > cut) ++r;
  }
  return r;
}

double spectral_norm(const Matrix& m) {
  const Svd s = svd(m, false);
  return s.singular.size() == 0 ? 0.0 : s.singular(0);
}

AlgebraElement hermitian_part(const AlgebraElement& x) {
  AlgebraElement h = x + x.adjoint();
  h *= Complex(0.5, 0.0);
  return h;
}

}  // namespace

ExactnessReport check_exactness(const TowerHomomorphism& alpha, const TowerHomomorphism& beta, std::size_t probes,
                                Level horizon, Rng& rng, double tol, std::size_t trace_length) {
  if (!alpha.target().same_as(beta.source())) {
    throw StructuralError("alpha (" + alpha.name() + ") does not land in the source of beta (" + beta.name() + ")");
  }
  if (!(tol > 0.0)) throw PreconditionError("exactness tolerance must be positive");
  ExactnessReport report;
  report.tol = tol;
  report.top = alpha.target().effective_horizon(horizon);

  Matrix alpha_top;
  Matrix kernel_basis;
  for (Level q = 1; q <= report.top; ++q) {
    if (beta.source_level(q) != q) {
      throw PreconditionError("beta must read level " + std::to_string(q) + " of its source at level " +
                              std::to_string(q));
    }
    const Matrix ma = alpha.level_map(q).linear_matrix();
    const Matrix mb = beta.level_map(q).linear_matrix();
    LevelExactness level;
    level.level = q;
    const double composite = spectral_norm(mb * ma);
    level.composite_residual = composite;
    if (composite > tol * std::max(1.0, spectral_norm(mb) * spectral_norm(ma))) {
      throw PreconditionError("beta after alpha is not zero at level " + std::to_string(q) + " (residual " +
                              std::to_string(composite) + ")");
    }
    const Svd sa = svd(ma, false);
    const Svd sb = svd(mb, q == report.top);
    level.image_rank = numerical_rank(sa.singular, tol);
    const std::size_t rank_beta = numerical_rank(sb.singular, tol);
    level.kernel_dimension = static_cast<std::size_t>(mb.cols()) - rank_beta;
    // The image is contained in the kernel, so equal dimensions mean equality.
    level.exact = level.image_rank == level.kernel_dimension;
    report.levels.push_back(level);
    if (q == report.top) {
      alpha_top = ma;
      const auto r = static_cast<Eigen::Index>(rank_beta);
      kernel_basis = sb.v.rightCols(sb.v.cols() - r);
    }
  }
  report.exact_original = std::all_of(report.levels.begin(), report.levels.end(),
                                      [](const LevelExactness& l) { return l.exact; });

  const BlockMap alpha_map = alpha.level_map(report.top);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> preimage(alpha_top);
  bool converged = true;
  for (std::size_t k = 0; k < probes; ++k) {
    ExactnessProbe probe;
    Vector coefficients(kernel_basis.cols());
    for (Eigen::Index i = 0; i < coefficients.size(); ++i) coefficients(i) = rng.complex_normal();
    AlgebraElement b = hermitian_part(AlgebraElement::from_vector(alpha_map.target(), kernel_basis * coefficients));
    const double norm = cstar_norm(b);
    if (norm > 0.0) b *= Complex(rng.uniform(0.25, 1.0) / norm, 0.0);
    probe.kernel_norm = cstar_norm(b);

    Vector x = alpha_top.cols() == 0 ? Vector(0) : Vector(preimage.solve(b.vectorize()));
    const AlgebraElement a = hermitian_part(AlgebraElement::from_vector(alpha_map.source(), x));
    auto distance = [&](std::size_t n) {
      return cstar_norm(alpha_map(apply_function(a, RationalFn{static_cast<unsigned>(n)})) - b);
    };
    for (std::size_t n = 1; n <= trace_length; ++n) probe.trace.push_back(distance(n));
    // |f_n(x) - x| <= M^3 / n^2 on [-M, M].
    const double m = std::max(probe.kernel_norm, 1e-300);
    probe.final_n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(2.0 * m * m * m / tol))));
    probe.final_residual = distance(probe.final_n);
    converged = converged && probe.final_residual <= tol;
    report.probes.push_back(std::move(probe));
  }
  report.exact_bounded = converged && report.levels.back().exact;
  return report;
}

double QuotientIsoReport::max_residual() const {
  return std::max({ideal_residual, well_defined_residual, homomorphism_residual, isometry_residual,
                   surjectivity_residual});
}

namespace {

Tower finite_version(const Tower& tower, Level horizon) {
  return tower.finite() ? tower : tower.truncated(horizon);
}

/// a with the selected blocks set to zero; its norm is dist(a, I).
AlgebraElement drop_selected(const AlgebraElement& a, const std::vector<bool>& selected) {
  std::vector<Matrix> blocks = a.blocks();
  for (std::size_t j = 0; j < selected.size(); ++j) {
    if (selected[j]) blocks[j].setZero();
  }
  return AlgebraElement(a.algebra(), std::move(blocks));
}

void raise(double& slot, double value) { slot = std::max(slot, value); }

}  // namespace

QuotientIsoReport quotient_iso_check(const Tower& tower, const BlockSelector& selector, Level horizon,
                                     std::size_t probes, Rng& rng, double tol) {
  const Tower work = finite_version(tower, horizon);
  const Level top = work.effective_horizon(horizon);
  const IdealDecomposition dec = closed_ideal(work, selector, top);
  const BlockMap q = dec.quotient_map.level_map(top);
  const BlockMap incl = dec.inclusion.level_map(top);
  const BlockMap section = dec.section.level_map(top);
  const BlockAlgebra algebra = work.level(top);
  const std::vector<bool> selected = selector(top, algebra);

  QuotientIsoReport report;
  for (std::size_t k = 0; k < probes; ++k) {
    const AlgebraElement a = random_element(rng, algebra);
    const AlgebraElement a2 = random_element(rng, algebra);
    const AlgebraElement i = incl(random_element(rng, incl.source()));
    const AlgebraElement y = random_element(rng, q.target());
    const double na = std::max(1.0, cstar_norm(a));
    const double ni = std::max(1.0, cstar_norm(i));

    raise(report.ideal_residual, cstar_norm(q(a * i)) / (na * ni));
    raise(report.ideal_residual, cstar_norm(q(i * a)) / (na * ni));
    raise(report.ideal_residual, cstar_norm(q(i.adjoint())) / ni);
    raise(report.well_defined_residual, cstar_norm(q(a + i) - q(a)) / (na + ni));
    raise(report.homomorphism_residual,
          cstar_norm(q(a * a2) - q(a) * q(a2)) / (na * std::max(1.0, cstar_norm(a2))));
    raise(report.homomorphism_residual, cstar_norm(q(a.adjoint()) - q(a).adjoint()) / na);
    raise(report.homomorphism_residual, cstar_norm(q(a + a2) - q(a) - q(a2)) / (na + cstar_norm(a2)));

    // ||q(a)||_inf through the quotient tower against the distance to I in A_b.
    const CoherentElement image = dec.quotient_map(CoherentElement::from_top(work, top, a));
    const double quotient_norm = uniform_norm(image, top).value;
    raise(report.isometry_residual, std::abs(quotient_norm - cstar_norm(drop_selected(a, selected))) / na);
    raise(report.surjectivity_residual, cstar_norm(q(section(y)) - y) / std::max(1.0, cstar_norm(y)));
  }
  report.pass = report.max_residual() <= tol;
  return report;
}

SeminormQuotientReport seminorm_quotient_check(const Tower& tower, Level p, Level horizon, std::size_t probes,
                                               Rng& rng, double tol) {
  const Tower work = finite_version(tower, horizon);
  const Level top = work.effective_horizon(horizon);
  if (p == 0 || p > top) {
    throw PreconditionError("seminorm level " + std::to_string(p) + " is outside 1.." + std::to_string(top));
  }
  const BlockSelector selector = kernel_selector(work, p);
  SeminormQuotientReport report;
  report.p = p;
  report.quotient = quotient_iso_check(work, selector, top, probes, rng, tol);

  const IdealDecomposition dec = closed_ideal(work, selector, top);
  const BlockMap q = dec.quotient_map.level_map(top);
  const BlockMap pi = work.composite_map(p, top);
  const BlockAlgebra algebra = work.level(top);
  const std::vector<bool> selected = selector(top, algebra);

  // Quotient block i is the i-th surviving block of A_top; psi sends it to
  // the block of A_p it is copied to.
  std::vector<std::size_t> index_of(selected.size(), 0);
  std::size_t next = 0;
  for (std::size_t j = 0; j < selected.size(); ++j) {
    if (!selected[j]) index_of[j] = next++;
  }
  std::vector<BlockMap::Assignment> assignments;
  for (const auto& a : pi.assignments()) assignments.push_back({index_of[*a.source], a.conjugator});
  const BlockMap psi(q.target(), pi.target(), std::move(assignments));
  report.psi_bijective = psi.is_surjective() && psi.source().block_count() == psi.target().block_count();

  for (std::size_t k = 0; k < probes; ++k) {
    const AlgebraElement a = random_element(rng, algebra);
    const double na = std::max(1.0, cstar_norm(a));
    const AlgebraElement via_quotient = psi(q(a));
    raise(report.factorization_residual, cstar_norm(via_quotient - pi(a)) / na);
    const double seminorm_value = seminorm(CoherentElement::from_top(work, top, a), p);
    raise(report.isometry_residual, std::abs(cstar_norm(via_quotient) - seminorm_value) / na);
    raise(report.isometry_residual, std::abs(seminorm_value - cstar_norm(drop_selected(a, selected))) / na);
  }
  report.pass = report.quotient.pass && report.psi_bijective && report.factorization_residual <= tol &&
                report.isometry_residual <= tol;
  return report;
}

}  // namespace procstar
