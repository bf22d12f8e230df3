#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ewpo/kernels.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

struct SlopeEstimate {
  double beta1_hat = 0.0;
  std::size_t used_pairs = 0;
  std::size_t dropped_pairs = 0;
};

/// Weighted average (sum w b / sum w) or quadratic loss (sum w^2 b / sum w^2)
/// of the pairwise slopes. Pairs with x_i == x_j are dropped and counted.
/// Throws NumericError when every pair is degenerate or the weights cancel.
SlopeEstimate estimate_slope_detail(const Sample& sample, const EstimatorConfig& config,
                                    kernels::Backend backend = kernels::Backend::Auto);

double estimate_slope(const Sample& sample, const EstimatorConfig& config,
                      kernels::Backend backend = kernels::Backend::Auto);

/// ybar - beta1_hat * xbar.
double estimate_intercept_from_means(const Sample& sample, double beta1_hat);

/// Weighted average of the pairwise intercepts y_i - b_(i,j) x_i, with the
/// same weights (squared for QuadraticLoss) as the slope. Only the adjacent
/// non-sorted AbsDeltaX case has known consistency; others are for study.
double estimate_intercept_weighted(const Sample& sample, const EstimatorConfig& config,
                                   kernels::Backend backend = kernels::Backend::Auto);

/// y - beta0 - beta1 x.
std::vector<double> residuals(const Sample& sample, double beta0, double beta1);

FitResult fit(const Sample& sample, const EstimatorConfig& config,
              kernels::Backend backend = kernels::Backend::Auto);

}  // namespace ewpo
