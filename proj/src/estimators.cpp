#include "ewpo/estimators.hpp"

#include <cmath>

#include "ewpo/pairs.hpp"

namespace ewpo {
namespace {

kernels::PairSums run_kernel(const Sample& sample, const EstimatorConfig& config, bool with_intercept,
                             kernels::Backend backend) {
  const kernels::PairSumRequest request{config.scheme.kind, config.weight, config.method,
                                        with_intercept};
  if (!config.scheme.sorted) return kernels::pair_sums(sample.x(), sample.y(), request, backend);
  const Sample s = arranged(sample, true);
  return kernels::pair_sums(s.x(), s.y(), request, backend);
}

void check_sums(const kernels::PairSums& sums) {
  if (sums.used == 0) throw NumericError("all pairs are degenerate (x_i == x_j for every pair)");
  if (std::abs(sums.denominator) <= 1e-14 * sums.magnitude) {
    throw NumericError("weights sum to zero");
  }
}

}  // namespace

SlopeEstimate estimate_slope_detail(const Sample& sample, const EstimatorConfig& config,
                                    kernels::Backend backend) {
  const auto sums = run_kernel(sample, config, false, backend);
  check_sums(sums);
  return {sums.numerator / sums.denominator, sums.used, sums.dropped};
}

double estimate_slope(const Sample& sample, const EstimatorConfig& config, kernels::Backend backend) {
  return estimate_slope_detail(sample, config, backend).beta1_hat;
}

double estimate_intercept_from_means(const Sample& sample, double beta1_hat) {
  return sample.mean_y() - beta1_hat * sample.mean_x();
}

double estimate_intercept_weighted(const Sample& sample, const EstimatorConfig& config,
                                   kernels::Backend backend) {
  const auto sums = run_kernel(sample, config, true, backend);
  check_sums(sums);
  return sums.intercept_numerator / sums.denominator;
}

std::vector<double> residuals(const Sample& sample, double beta0, double beta1) {
  std::vector<double> r(sample.size());
  const auto x = sample.x();
  const auto y = sample.y();
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - beta0 - beta1 * x[i];
  return r;
}

FitResult fit(const Sample& sample, const EstimatorConfig& config, kernels::Backend backend) {
  FitResult out;
  out.config = config;
  out.n = sample.size();
  out.x_mean = sample.mean_x();

  if (config.intercept == InterceptMode::PairwiseWeighted) {
    const auto sums = run_kernel(sample, config, true, backend);
    check_sums(sums);
    out.beta1_hat = sums.numerator / sums.denominator;
    out.beta0_hat = sums.intercept_numerator / sums.denominator;
    out.dropped_pairs = sums.dropped;
  } else {
    const auto slope = estimate_slope_detail(sample, config, backend);
    out.beta1_hat = slope.beta1_hat;
    out.dropped_pairs = slope.dropped_pairs;
    out.beta0_hat = config.intercept == InterceptMode::Zero
                        ? 0.0
                        : estimate_intercept_from_means(sample, out.beta1_hat);
  }
  out.residuals = residuals(sample, out.beta0_hat, out.beta1_hat);
  return out;
}

}  // namespace ewpo
