#pragma once

// Pair-sum kernels behind every univariate estimator.
//
// All kernels take x/y already in pairing order (see ewpo::arranged) and
// iterate pairs (i, j), i > j, without materialising the pair list.
//
//   pair_sums_reference   serial double loop, compensated sums. The oracle.
//   pair_sums_parallel    OpenMP over fixed row chunks; per-chunk partials are
//                         combined in chunk order, so the result depends only
//                         on kRowsPerChunk, never on the thread count.
//   pair_sums_closed_form O(n log n) rank / moment identities for DeltaX and
//                         AbsDeltaX full-pairwise sums (no pairwise intercept).

#include <cstddef>
#include <optional>
#include <span>

#include "ewpo/types.hpp"

namespace ewpo::kernels {

enum class Backend { Reference, Parallel, Auto };

inline constexpr std::size_t kRowsPerChunk = 64;

struct PairSumRequest {
  PairKind kind = PairKind::FullPairwise;
  WeightKind weight = WeightKind::AbsDeltaX;
  Method method = Method::WeightedAverage;
  bool with_intercept = false;
};

/// With v = w (weighted average) or v = w^2 (quadratic loss), summed over
/// non-degenerate pairs: numerator = sum v*slope, denominator = sum v,
/// magnitude = sum |v|, intercept_numerator = sum v*(y_i - slope*x_i).
struct PairSums {
  double numerator = 0.0;
  double denominator = 0.0;
  double magnitude = 0.0;
  double intercept_numerator = 0.0;
  std::size_t used = 0;
  std::size_t dropped = 0;
};

PairSums pair_sums_reference(std::span<const double> x, std::span<const double> y,
                             const PairSumRequest& request);

PairSums pair_sums_parallel(std::span<const double> x, std::span<const double> y,
                            const PairSumRequest& request);

/// Empty when no closed form exists for the request.
std::optional<PairSums> pair_sums_closed_form(std::span<const double> x, std::span<const double> y,
                                              const PairSumRequest& request);

/// Auto: closed form when available, otherwise Parallel for full-pairwise
/// and Reference for adjacent (n - 1 pairs is not worth a thread team).
PairSums pair_sums(std::span<const double> x, std::span<const double> y,
                   const PairSumRequest& request, Backend backend = Backend::Auto);

void set_num_threads(int threads);
int num_threads();

}  // namespace ewpo::kernels
