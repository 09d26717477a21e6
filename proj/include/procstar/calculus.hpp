#pragma once

#include <functional>
#include <string>
#include <vector>

#include "procstar/config.hpp"
#include "procstar/functions.hpp"
#include "procstar/tower.hpp"

namespace procstar {

enum class Boundedness { Bounded, Unbounded, UnknownAtTruncation };

std::string to_string(Boundedness status);

/// Three-valued answer to "is sup_p p(a) finite?".
///
/// Bounded: `value` is the sup (an upper bound when the certificate says so).
/// Unbounded: `level` is the first level whose value exceeds the threshold.
/// UnknownAtTruncation: `value` is the largest value seen up to `level`.
struct BoundednessVerdict {
  Boundedness status = Boundedness::UnknownAtTruncation;
  double value = 0.0;
  Level level = 0;
  std::string certificate;
  bool exact = true;

  bool bounded() const noexcept { return status == Boundedness::Bounded; }
};

/// p(a) = ||a_p||.
double seminorm(const CoherentElement& e, Level p);

/// Visits the blocks of each level that are not images of blocks one level
/// up, i.e. every block of level 1 and the deleted source blocks of each
/// connecting map. Along a coherent element, these carry all of the norm and
/// spectral information. The visitor returns false to stop the scan.
void scan_new_blocks(const CoherentElement& e, Level horizon,
                     const std::function<bool(Level, std::size_t, const Matrix&)>& visit);

/// Called after all new blocks of a level were visited.
void scan_levels(const CoherentElement& e, Level horizon,
                 const std::function<void(Level, std::size_t, const Matrix&)>& visit_block,
                 const std::function<bool(Level)>& level_done);

/// ||a||_inf classification. A certificate decides immediately; otherwise
/// the seminorms are scanned level by level. An exhausted finite tower is
/// Bounded, a seminorm above the threshold is Unbounded, anything else is
/// UnknownAtTruncation.
BoundednessVerdict uniform_norm(const CoherentElement& e, Level horizon,
                                double divergence_threshold = defaults::kDivergenceThreshold);

struct SpectrumReport {
  std::vector<Complex> points;
  Level horizon = 0;
  double radius = 0.0;
};

/// Union of the level spectra up to the horizon. On a non-unital tower the
/// spectrum is taken in the unitization and so contains 0.
SpectrumReport pro_spectrum(const CoherentElement& e, Level horizon, double cluster_tol = defaults::kClusterTol);

/// The same classification as uniform_norm applied to r(a) = sup_p r(a_p).
BoundednessVerdict is_spectrally_bounded(const CoherentElement& e, Level horizon,
                                         double threshold = defaults::kDivergenceThreshold);

/// (f(a_p))_p. Requires f(0) = 0 on non-unital towers. Domain and normality
/// errors surface when a level is materialized.
CoherentElement lift_function(const CoherentElement& e, const FunctionDescriptor& f,
                              double tol = defaults::kNormalTol);

}  // namespace procstar
