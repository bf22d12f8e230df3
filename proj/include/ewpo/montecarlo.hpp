#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ewpo/kernels.hpp"
#include "ewpo/numeric.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

enum class XDistKind { Uniform, Normal };

/// Uniform: support [a, b]. Normal: mean a, variance b.
struct XDist {
  XDistKind kind = XDistKind::Uniform;
  double a = -10.0;
  double b = 10.0;

  double mean() const;
  double sd() const;
};

enum class UDistKind { Normal, SkewedNormal };

/// Normal: N(0, variance). SkewedNormal: xi + lambda |v| + z with v ~ N(0,1),
/// z ~ N(0, variance), xi = -lambda sqrt(2/pi) so that E u = 0.
struct UDist {
  UDistKind kind = UDistKind::Normal;
  double variance = 1.0;
  double lambda = 1.0;
};

/// y = beta0 + beta1 x + u. With rho != 0 the noise is
/// u = rho (sd_u / sd_x)(x - mu_x) + sqrt(1 - rho^2) u0, u0 ~ N(0, variance),
/// which gives corr(x, u) = rho for any law of x.
struct DgpSpec {
  double beta0 = 0.0;
  double beta1 = 0.5;
  XDist x{};
  UDist u{};
  double rho = 0.0;
  std::size_t n = 500;
  std::uint64_t seed = 1;

  /// Throws DataError: |rho| >= 1, rho != 0 with skewed noise, n < 2, bad
  /// distribution parameters.
  void validate() const;
};

struct Draw {
  Sample sample;
  std::vector<double> noise;
  double corr_xu = 0.0;
};

/// Replication `rep` of the DGP, seeded by derive_seed(spec.seed, rep).
Draw generate_draw(const DgpSpec& spec, std::uint64_t rep);

/// generate_draw(spec, 0).sample
Sample generate(const DgpSpec& spec);

enum class Target { EstimatorDist, InterceptDist, CovStatDist, ResidualMeanDist, BiasCorrectedDist };

std::string_view to_string(Target target);
Target parse_target(std::string_view name);  // estimator intercept covstat residual_mean bias_corrected

/// Per-replication values of `target` for one DGP cell, in replication
/// order, with the empirical corr(x, u) of each draw. ResidualMeanDist and
/// BiasCorrectedDist fit the zero-intercept model regardless of
/// config.intercept.
struct CellDraws {
  std::vector<double> values;
  std::vector<double> corr_xu;
};

CellDraws run_cell(const DgpSpec& spec, const EstimatorConfig& config, Target target, std::size_t reps,
                   kernels::Backend backend = kernels::Backend::Auto);

struct SummaryRow {
  std::size_t n = 0;
  double rho = 0.0;
  std::string label;  // "Exogen" for rho == 0, else the rho value
  Moments stats{};    // kurtosis raw (3 under normality)
  double mean_corr = 0.0;
};

struct SummaryTable {
  Target target = Target::EstimatorDist;
  EstimatorConfig config{};
  std::size_t reps = 0;
  std::vector<SummaryRow> rows;

  std::string to_csv() const;
  std::string to_text() const;
};

/// One row per DGP cell, in input order. Throws DataError when reps < 100.
SummaryTable run_experiment(const std::vector<DgpSpec>& dgps, const EstimatorConfig& config, Target target,
                            std::size_t reps, kernels::Backend backend = kernels::Backend::Auto);

// Declarative experiment specs (JSON).

enum class NormalParam { Variance, Sd };

struct ExperimentSpec {
  std::uint64_t seed = 1;
  std::size_t reps = 1000;
  Target target = Target::EstimatorDist;
  EstimatorConfig estimator{};
  std::vector<DgpSpec> cells;  // resolved: variance convention, per-cell seeds
};

/// Accepts
///   { "seed", "reps", "target", "estimator": {scheme, sorted, weight, method, intercept},
///     "normal_param": "variance" | "sd",
///     "dgp": { "beta0", "beta1", "x": {"dist": "uniform"|"normal", "a", "b"},
///              "u": {"dist": "normal"|"skewed", "variance" | "sd", "lambda"} },
///     "grid": { "n": [...], "rho": [...] }   or   "cells": [ {"n", "rho", "seed"?}, ... ] }
/// "normal_param" says whether b of a normal x is a variance or a standard
/// deviation. Cells without a seed get derive_seed(seed, cell index).
/// Throws DataError on malformed specs.
ExperimentSpec parse_experiment_spec(const std::string& json_text);

/// Fully resolved JSON; parse_experiment_spec of it yields the same spec.
std::string to_json_string(const ExperimentSpec& spec);

SummaryTable run_experiment(const ExperimentSpec& spec, kernels::Backend backend = kernels::Backend::Auto);

}  // namespace ewpo
