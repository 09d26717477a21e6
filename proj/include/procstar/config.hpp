#pragma once

#include <cstddef>

// Default tolerances. Every report echoes the values actually used.
namespace procstar::defaults {

inline constexpr double kClusterTol = 1e-8;
inline constexpr double kNormalTol = 1e-10;
inline constexpr double kCoherenceTol = 1e-10;
inline constexpr double kDivergenceThreshold = 1e6;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kConjugatorTol = 1e-12;
inline constexpr double kGelfandTol = 1e-12;
inline constexpr std::size_t kTraceLength = 50;
inline constexpr std::size_t kExactnessProbes = 20;
inline constexpr std::size_t kPathSamples = 64;
inline constexpr std::size_t kRandomProbes = 100;

}  // namespace procstar::defaults
