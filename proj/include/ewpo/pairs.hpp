#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ewpo/types.hpp"

namespace ewpo {

/// Observation order used for pairing: identity, or a stable ascending sort on x.
std::vector<std::size_t> arrangement(std::span<const double> x, bool sorted);

/// The sample reordered by `arrangement(sample.x(), sorted)`.
Sample arranged(const Sample& sample, bool sorted);

/// Adjacent: (1,0),(2,1),...,(n-1,n-2). FullPairwise: every i > j, i ascending
/// then j ascending. Positions refer to the (optionally sorted) arrangement.
/// Throws DataError when x has fewer than two entries.
std::vector<PairIndex> enumerate_pairs(const PairScheme& scheme, std::span<const double> x);

inline std::size_t pair_count(PairKind kind, std::size_t n) {
  if (n < 2) return 0;
  return kind == PairKind::Adjacent ? n - 1 : n * (n - 1) / 2;
}

/// (y_i - y_j) / (x_i - x_j) over the original indices of `pair`.
/// Throws NumericError("degenerate pair") when x_i == x_j.
double pairwise_slope(const Sample& sample, const PairIndex& pair);

/// y_i - slope * x_i: the intercept of the line through the pair.
double pairwise_intercept(const Sample& sample, const PairIndex& pair);

double weight_value(WeightKind kind, double dx, double dy);

double pair_weight(WeightKind kind, const Sample& sample, const PairIndex& pair);

/// Pairwise slopes in canonical pair order; NaN marks a degenerate pair.
std::vector<double> pairwise_parameters(const Sample& sample, const PairScheme& scheme);

}  // namespace ewpo
