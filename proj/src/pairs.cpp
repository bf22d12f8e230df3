#include "ewpo/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ewpo {

std::vector<std::size_t> arrangement(std::span<const double> x, bool sorted) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (sorted) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  }
  return order;
}

Sample arranged(const Sample& sample, bool sorted) {
  if (!sorted) return sample;
  const auto order = arrangement(sample.x(), true);
  return sample.subset(order);
}

std::vector<PairIndex> enumerate_pairs(const PairScheme& scheme, std::span<const double> x) {
  if (x.size() < 2) throw DataError("insufficient observations: need at least 2");
  const auto order = arrangement(x, scheme.sorted);
  const std::size_t n = x.size();
  std::vector<PairIndex> pairs;
  pairs.reserve(pair_count(scheme.kind, n));
  if (scheme.kind == PairKind::Adjacent) {
    for (std::size_t i = 1; i < n; ++i) pairs.push_back({i, i - 1, order[i], order[i - 1]});
  } else {
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) pairs.push_back({i, j, order[i], order[j]});
    }
  }
  return pairs;
}

double pairwise_slope(const Sample& sample, const PairIndex& pair) {
  const double dx = sample.x()[pair.orig_i] - sample.x()[pair.orig_j];
  if (dx == 0.0) throw NumericError("degenerate pair: x_i == x_j");
  return (sample.y()[pair.orig_i] - sample.y()[pair.orig_j]) / dx;
}

double pairwise_intercept(const Sample& sample, const PairIndex& pair) {
  return sample.y()[pair.orig_i] - pairwise_slope(sample, pair) * sample.x()[pair.orig_i];
}

double weight_value(WeightKind kind, double dx, double dy) {
  switch (kind) {
    case WeightKind::DeltaX:
      return dx;
    case WeightKind::AbsDeltaX:
      return std::abs(dx);
    case WeightKind::Euclidean:
      return std::hypot(dx, dy);
    case WeightKind::SqrtAbsDeltaX:
      return std::sqrt(std::abs(dx));
  }
  return 0.0;
}

double pair_weight(WeightKind kind, const Sample& sample, const PairIndex& pair) {
  const double dx = sample.x()[pair.orig_i] - sample.x()[pair.orig_j];
  const double dy = sample.y()[pair.orig_i] - sample.y()[pair.orig_j];
  return weight_value(kind, dx, dy);
}

std::vector<double> pairwise_parameters(const Sample& sample, const PairScheme& scheme) {
  const auto pairs = enumerate_pairs(scheme, sample.x());
  std::vector<double> slopes;
  slopes.reserve(pairs.size());
  for (const auto& p : pairs) {
    const double dx = sample.x()[p.orig_i] - sample.x()[p.orig_j];
    slopes.push_back(dx == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                               : (sample.y()[p.orig_i] - sample.y()[p.orig_j]) / dx);
  }
  return slopes;
}

}  // namespace ewpo
