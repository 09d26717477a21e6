#include "procstar/calculus.hpp"

#include <algorithm>
#include <cmath>

#include "procstar/core.hpp"

namespace procstar {

std::string to_string(Boundedness status) {
  switch (status) {
    case Boundedness::Bounded: return "bounded";
    case Boundedness::Unbounded: return "unbounded";
    case Boundedness::UnknownAtTruncation: return "unknown_at_truncation";
  }
  return "?";
}

double seminorm(const CoherentElement& e, Level p) { return cstar_norm(e.project(p)); }

void scan_levels(const CoherentElement& e, Level horizon,
                 const std::function<void(Level, std::size_t, const Matrix&)>& visit_block,
                 const std::function<bool(Level)>& level_done) {
  const Level top = e.available(horizon);
  const Tower& tower = e.tower();
  for (Level p = 1; p <= top; ++p) {
    if (p == 1) {
      const std::size_t blocks = tower.level(1).block_count();
      for (std::size_t j = 0; j < blocks; ++j) visit_block(1, j, e.block(1, j));
    } else {
      for (std::size_t j : tower.connecting_map(p - 1).unassigned_sources()) visit_block(p, j, e.block(p, j));
    }
    if (!level_done(p)) return;
  }
}

void scan_new_blocks(const CoherentElement& e, Level horizon,
                     const std::function<bool(Level, std::size_t, const Matrix&)>& visit) {
  bool keep_going = true;
  scan_levels(
      e, horizon,
      [&](Level p, std::size_t j, const Matrix& m) {
        if (keep_going) keep_going = visit(p, j, m);
      },
      [&](Level) { return keep_going; });
}

namespace {

/// Shared scan for the norm and the spectral radius.
BoundednessVerdict classify(const CoherentElement& e, Level horizon, double threshold,
                            const std::optional<Certificate>& certificate,
                            const std::function<double(const Matrix&, std::size_t)>& measure) {
  if (!(threshold > 0.0)) throw PreconditionError("divergence threshold must be positive");
  BoundednessVerdict out;
  if (certificate && certificate->exact) {
    out.status = Boundedness::Bounded;
    out.value = certificate->value;
    out.certificate = certificate->reason;
    return out;
  }
  const Tower& tower = e.tower();
  const Level top = e.available(horizon);
  const bool exhausts = tower.finite() && top == *tower.depth();
  double running = 0.0;
  Level witness = 0;
  scan_levels(
      e, horizon, [&](Level, std::size_t j, const Matrix& m) { running = std::max(running, measure(m, j)); },
      [&](Level p) {
        if (!exhausts && running > threshold) {
          witness = p;
          return false;
        }
        return true;
      });
  if (witness != 0) {
    out.status = Boundedness::Unbounded;
    out.value = running;
    out.level = witness;
    return out;
  }
  if (exhausts) {
    out.status = Boundedness::Bounded;
    out.value = running;
    out.level = top;
    out.certificate = "finite tower exhausted at level " + std::to_string(top);
    return out;
  }
  if (certificate) {
    out.status = Boundedness::Bounded;
    out.value = certificate->value;
    out.certificate = certificate->reason;
    out.exact = false;
    return out;
  }
  out.status = Boundedness::UnknownAtTruncation;
  out.value = running;
  out.level = top;
  return out;
}

}  // namespace

BoundednessVerdict uniform_norm(const CoherentElement& e, Level horizon, double divergence_threshold) {
  return classify(e, horizon, divergence_threshold, e.properties().norm,
                  [](const Matrix& m, std::size_t) { return operator_norm(m); });
}

BoundednessVerdict is_spectrally_bounded(const CoherentElement& e, Level horizon, double threshold) {
  const auto& props = e.properties();
  std::optional<Certificate> certificate = props.spectral_radius;
  if (!certificate && props.normal && props.norm) {
    // For normal elements every seminorm is the level spectral radius.
    certificate = Certificate{props.norm->value, "normal element: " + props.norm->reason, props.norm->exact};
  }
  auto radius = [](const Matrix& m, std::size_t j) {
    double r = 0.0;
    for (Complex z : block_eigenvalues(m, j)) r = std::max(r, std::abs(z));
    return r;
  };
  return classify(e, horizon, threshold, certificate, radius);
}

SpectrumReport pro_spectrum(const CoherentElement& e, Level horizon, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw PreconditionError("cluster tolerance must be positive");
  std::vector<Complex> raw;
  if (!e.tower().unital()) raw.emplace_back(0.0, 0.0);
  Level reached = 0;
  scan_levels(
      e, horizon,
      [&](Level, std::size_t j, const Matrix& m) {
        // Collapse each block before merging so the union stays small.
        const auto eig = block_eigenvalues(m, j);
        for (const auto& p : cluster_points(eig, cluster_tol)) raw.push_back(p.value);
      },
      [&](Level p) {
        reached = p;
        return true;
      });
  SpectrumReport report;
  report.horizon = reached;
  report.points = values(cluster_points(raw, cluster_tol));
  for (Complex z : report.points) report.radius = std::max(report.radius, std::abs(z));
  return report;
}

CoherentElement lift_function(const CoherentElement& e, const FunctionDescriptor& f, double tol) {
  validate(f);
  if (!e.tower().unital()) {
    Complex at_zero;
    try {
      at_zero = evaluate(f, 0.0, tol);
    } catch (const DomainError&) {
      throw PreconditionError(describe(f) + " is undefined at 0, which a non-unital tower requires");
    }
    if (std::abs(at_zero) > tol) {
      throw PreconditionError(describe(f) + " does not vanish at 0, which a non-unital tower requires");
    }
  }
  CoherentElement out = e.map_blocks([f, tol](Level, std::size_t, const Matrix& m) {
    return apply_function_block(m, f, tol);
  });
  ElementProperties props;
  props.normal = e.properties().normal;
  props.selfadjoint = e.properties().selfadjoint && preserves_selfadjoint(f);
  if (e.properties().selfadjoint) {
    if (std::holds_alternative<ExpI>(f) && e.tower().unital()) {
      props.norm = Certificate{1.0, "exponential of a self-adjoint element is unitary", true};
      props.normal = true;
    } else if (const auto* r = std::get_if<RationalFn>(&f)) {
      props.norm = Certificate{r->n / 2.0, "sup of |f_" + std::to_string(r->n) + "| over the reals", false};
    }
  }
  return out.with_properties(props).with_label(describe(f) + "(" + e.label() + ")");
}

}  // namespace procstar
