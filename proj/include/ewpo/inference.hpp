#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ewpo/kernels.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

// ---------------------------------------------------------------------------
// Delete-d jackknife

struct JackknifeConfig {
  std::size_t d = 0;  // observations removed per replicate
  std::size_t R = 10000;
  double alpha = 0.05;
  std::uint64_t seed = 1;

  /// d = ceil(n/2), R = 10000.
  static JackknifeConfig defaults_for(std::size_t n, std::uint64_t seed = 1);

  /// sqrt(n) < d < n, n - d >= 2, 100 <= R < C(n, n - d), alpha in (0, 1).
  /// Throws DataError naming the violated bound.
  void validate(std::size_t n) const;
};

struct JackknifeResult {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<double> replicates;  // in replicate order, not sorted
};

/// Statistic evaluated on one subsample.
using SampleStatistic = std::function<double(const Sample&)>;

/// R values of `statistic` on uniform without-replacement subsamples of
/// size n - d. Subsample r depends only on (seed, r); kept observations stay
/// in their original relative order. Parallel over replicates.
std::vector<double> jackknife_replicates(const Sample& sample, const JackknifeConfig& jk,
                                         const SampleStatistic& statistic);

/// Indices kept by replicate r (sorted ascending, size n - d).
std::vector<std::size_t> jackknife_subsample(std::size_t n, std::size_t d, std::uint64_t seed,
                                             std::size_t r);

/// Lower = floor(alpha/2 R)-th order statistic (at least the first), upper =
/// ceil((1 - alpha/2) R)-th. 1-based order statistics of `replicates`.
std::pair<double, double> jackknife_bounds(std::vector<double> replicates, double alpha);

JackknifeResult jackknife_ci(const Sample& sample, const EstimatorConfig& config,
                             const JackknifeConfig& jk,
                             kernels::Backend backend = kernels::Backend::Auto);

// ---------------------------------------------------------------------------
// Brownian functionals

struct BrownianSimConfig {
  std::size_t steps = 10000;
  std::size_t reps = 50000;
  std::uint64_t seed = 1;
  double sigma_x = 1.0;  // the Prop-2 draws are scaled by sigma_x * sigma_u
  double sigma_u = 1.0;

  /// steps >= 100, reps >= 1000, sigmas > 0.
  void validate() const;
};

/// One discretised draw of two independent standard Brownian motions B, W on
/// [0, 1]: increments eps / sqrt(steps), time integrals as (1/steps) sum,
/// Ito integrals as left-point sums.
struct BrownianFunctionals {
  double B1 = 0.0;
  double W1 = 0.0;
  double int_B = 0.0;
  double int_W = 0.0;
  double int_BW = 0.0;
  double int_B_dW = 0.0;
  double int_W_dB = 0.0;

  /// (W(1) - 2 int W) / (B(1) - 2 int B)
  double prop1_ratio() const;
  /// B(1)W(1) + int BW - int B dW - int W dB - B(1)^2 * prop1_ratio()
  double prop2_statistic() const;
};

BrownianFunctionals simulate_functionals(std::size_t steps, std::uint64_t seed, std::size_t rep);

/// Draws in replicate order; draw r uses derive_seed(cfg.seed, r).
std::vector<BrownianFunctionals> simulate_functional_draws(const BrownianSimConfig& cfg);

std::vector<double> simulate_prop1_ratio(const BrownianSimConfig& cfg);
std::vector<double> simulate_prop2_null(const BrownianSimConfig& cfg);

/// Serial references; identical output to the parallel versions.
std::vector<double> simulate_prop1_ratio_serial(const BrownianSimConfig& cfg);
std::vector<double> simulate_prop2_null_serial(const BrownianSimConfig& cfg);

// ---------------------------------------------------------------------------
// Critical values

enum class CriticalSource { Prop1Ratio, Prop2Statistic, Other };

struct CriticalRow {
  double alpha = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct CriticalValueTable {
  std::vector<CriticalRow> rows;  // ascending alpha
  CriticalSource source = CriticalSource::Other;
  BrownianSimConfig config{};

  /// Row with |alpha - a| < 1e-12, or nullptr.
  const CriticalRow* find(double alpha) const;
};

/// Per alpha: empirical alpha/2 and 1 - alpha/2 quantiles (linear
/// interpolation between order statistics). Throws DataError on empty draws
/// or alpha outside (0, 0.5).
CriticalValueTable critical_values(std::vector<double> draws, const std::vector<double>& alphas,
                                   CriticalSource source = CriticalSource::Other,
                                   const BrownianSimConfig& config = {});

std::string to_csv(const CriticalValueTable& table);
std::string to_json_string(const CriticalValueTable& table);
std::string_view to_string(CriticalSource source);

}  // namespace ewpo
