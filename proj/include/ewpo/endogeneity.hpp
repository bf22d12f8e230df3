#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ewpo/inference.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

enum class TestKind { ResidualMean, Covariance };
enum class NullSource { AnalyticT, SimulatedBrownian, Jackknife };
enum class Alternative { TwoSided, Lower };

struct CriticalBounds {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = 0.0;
};

struct TestReport {
  double statistic = 0.0;
  TestKind kind = TestKind::ResidualMean;
  WeightKind weight = WeightKind::AbsDeltaX;
  NullSource null_source = NullSource::AnalyticT;
  Alternative alternative = Alternative::TwoSided;
  std::optional<CriticalBounds> critical_values;
  std::optional<bool> reject;  // present iff critical_values is
  std::optional<double> delta_hat;
  std::optional<double> p_value;
  std::vector<std::string> warnings;
};

std::string_view to_string(TestKind kind);
std::string_view to_string(NullSource source);
std::string_view to_string(Alternative alt);
NullSource parse_null_source(std::string_view name);  // "t", "brownian", "jackknife"
Alternative parse_alternative(std::string_view name);  // "two-sided", "lower"

/// t = mean(u_hat) / (sd(u_hat) / sqrt(n)) against Student-t with n - 1
/// degrees of freedom; delta_hat = -mean(u_hat) / xbar. `fit` must come from
/// the zero-intercept model on `sample`. Warns when |xbar| < 0.1 sd(x).
TestReport residual_mean_test(const Sample& sample, const FitResult& fit, double alpha = 0.05,
                              Alternative alternative = Alternative::TwoSided);

/// beta1_hat + mean(u_hat) / xbar. Throws NumericError when xbar == 0.
double bias_corrected_slope(const FitResult& fit);

/// n^-2 sum_{p>q} (x_p - x_q)(u_p - u_q) with u the fit residuals, computed
/// in O(n) as n^-1 sum (x - xbar)(u - ubar).
double covariance_statistic(const Sample& sample, const FitResult& fit);

struct CovarianceTestOptions {
  Alternative alternative = Alternative::TwoSided;
  /// Brownian null: simulation settings when no precomputed table is given.
  BrownianSimConfig simulation{2000, 20000, 1, 1.0, 1.0};
  /// Brownian null: optional precomputed unit-scale Prop-2 table.
  const CriticalValueTable* table = nullptr;
  /// Jackknife null: defaults_for(n) when unset.
  std::optional<JackknifeConfig> jackknife;
};

/// Brownian null (DeltaX only): the statistic is S / (sd(x) sd(u_hat)) and the
/// decision uses the Prop-2 quantiles. Jackknife null: delete-d replicates of
/// S (refitting on each subsample); reject when 0 falls outside the interval.
/// QuadraticLoss is refused (it forces S = 0). Throws DataError on a
/// null/weight mismatch.
TestReport covariance_test(const Sample& sample, const EstimatorConfig& config, double alpha,
                           NullSource null_source, const CovarianceTestOptions& options = {});

struct IvCandidateResult {
  std::string label;
  std::size_t candidate = 0;  // 0 is the untransformed model, k the k-th candidate
  bool feasible = true;
  std::string reason;
  double statistic = 0.0;
  double abs_statistic = 0.0;
};

struct IvScreeningResult {
  std::vector<IvCandidateResult> ranking;  // ascending |S|, infeasible last
  std::size_t selected = 0;                // index into ranking
};

/// For the untransformed model and each candidate g (z = g y, w = g x),
/// fit `config` and compute |S|. Ties keep candidate order. A candidate whose
/// transformed fit is undefined is marked infeasible. Throws DataError when a
/// candidate has the wrong length, NumericError when no model is feasible.
IvScreeningResult iv_screening(const Sample& sample, const std::vector<std::vector<double>>& candidates,
                               const EstimatorConfig& config = {},
                               const std::vector<std::string>& labels = {});

}  // namespace ewpo
