#pragma once

#include <vector>

#include "qiro/correlations.hpp"
#include "qiro/random.hpp"

namespace qiro {

/// A correlation entry; i == j marks a one-point value.
struct RankedEntry
{
  int i = 0;
  int j = 0;
  double value = 0.0;

  bool one_point() const { return i == j; }
};

/// Two magnitudes closer than this (relative to the larger, floored at 1)
/// count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Every stored entry of M ordered by descending |value|. Runs of tied
/// magnitudes are shuffled with `rng`, so the first element is a uniformly
/// random choice among the maximisers.
std::vector<RankedEntry> ranked_entries(const Correlations& M, Rng& rng);

} // namespace qiro
