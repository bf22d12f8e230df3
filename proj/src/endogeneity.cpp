#include "ewpo/endogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "ewpo/estimators.hpp"
#include "ewpo/numeric.hpp"

namespace ewpo {

std::string_view to_string(TestKind kind) {
  return kind == TestKind::ResidualMean ? "residual" : "covariance";
}

std::string_view to_string(NullSource source) {
  switch (source) {
    case NullSource::AnalyticT:
      return "t";
    case NullSource::SimulatedBrownian:
      return "brownian";
    case NullSource::Jackknife:
      return "jackknife";
  }
  return "?";
}

std::string_view to_string(Alternative alt) { return alt == Alternative::TwoSided ? "two-sided" : "lower"; }

NullSource parse_null_source(std::string_view name) {
  if (name == "t") return NullSource::AnalyticT;
  if (name == "brownian") return NullSource::SimulatedBrownian;
  if (name == "jackknife") return NullSource::Jackknife;
  throw DataError("unknown null source '" + std::string(name) + "' (expected one of: t brownian jackknife)");
}

Alternative parse_alternative(std::string_view name) {
  if (name == "two-sided") return Alternative::TwoSided;
  if (name == "lower") return Alternative::Lower;
  throw DataError("unknown alternative '" + std::string(name) + "' (expected one of: two-sided lower)");
}

TestReport residual_mean_test(const Sample& sample, const FitResult& fit, double alpha,
                              Alternative alternative) {
  if (fit.config.intercept != InterceptMode::Zero) {
    throw DataError("residual test requires zero-intercept model");
  }
  if (fit.residuals.size() != sample.size()) throw DataError("fit does not belong to this sample");
  if (sample.size() < 3) throw DataError("insufficient observations: residual test needs n >= 3");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");

  const auto u = describe(fit.residuals);
  const auto x = describe(sample.x());
  const double n = static_cast<double>(sample.size());

  TestReport rep;
  rep.kind = TestKind::ResidualMean;
  rep.weight = fit.config.weight;
  rep.null_source = NullSource::AnalyticT;
  rep.alternative = alternative;
  if (u.sd > 0.0) {
    rep.statistic = u.mean / (u.sd / std::sqrt(n));
  } else {
    rep.statistic = u.mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), u.mean);
  }
  if (x.mean != 0.0) rep.delta_hat = -u.mean / x.mean;
  if (std::abs(x.mean) < 0.1 * x.sd) {
    rep.warnings.push_back("mean of x is close to zero relative to its spread; the residual test has little power");
  }

  const boost::math::students_t dist(n - 1.0);
  const double t = rep.statistic;
  if (alternative == Alternative::TwoSided) {
    const double q = boost::math::quantile(dist, 1.0 - alpha / 2.0);
    rep.critical_values = CriticalBounds{-q, q, alpha};
    rep.reject = std::abs(t) > q;
    rep.p_value = std::isfinite(t) ? 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))) : 0.0;
  } else {
    const double q = boost::math::quantile(dist, 1.0 - alpha);
    rep.critical_values = CriticalBounds{-q, std::numeric_limits<double>::infinity(), alpha};
    rep.reject = t < -q;
    rep.p_value = std::isfinite(t) ? boost::math::cdf(dist, t) : (t < 0 ? 0.0 : 1.0);
  }
  return rep;
}

double bias_corrected_slope(const FitResult& fit) {
  if (fit.x_mean == 0.0) throw NumericError("mean of regressor is zero; correction undefined");
  return fit.beta1_hat + mean(fit.residuals) / fit.x_mean;
}

double covariance_statistic(const Sample& sample, const FitResult& fit) {
  if (fit.residuals.size() != sample.size()) throw DataError("fit does not belong to this sample");
  const auto x = sample.x();
  const double mx = sample.mean_x();
  const double mu = mean(fit.residuals);
  CompensatedSum s;
  for (std::size_t i = 0; i < x.size(); ++i) s.add((x[i] - mx) * (fit.residuals[i] - mu));
  return s.value() / static_cast<double>(x.size());
}

TestReport covariance_test(const Sample& sample, const EstimatorConfig& config, double alpha,
                           NullSource null_source, const CovarianceTestOptions& options) {
  if (config.method == Method::QuadraticLoss) {
    throw DataError("covariance test needs a weighted-average estimator: the quadratic-loss form "
                    "satisfies the normal equations, which force S = 0");
  }
  if (null_source == NullSource::AnalyticT) {
    throw DataError("covariance test null must be 'brownian' or 'jackknife'");
  }
  if (null_source == NullSource::SimulatedBrownian && config.weight != WeightKind::DeltaX) {
    throw DataError("the Brownian null is derived for w = dx only and may not be appropriate for "
                    "other weights; use the jackknife null");
  }
  if (!(alpha > 0.0 && alpha < 0.5)) throw DataError("alpha must lie in (0, 0.5)");

  const auto f = fit(sample, config);
  TestReport rep;
  rep.kind = TestKind::Covariance;
  rep.weight = config.weight;
  rep.null_source = null_source;
  rep.alternative = options.alternative;
  const double S = covariance_statistic(sample, f);

  if (null_source == NullSource::SimulatedBrownian) {
    const double sx = describe(sample.x()).sd;
    const double su = describe(f.residuals).sd;
    if (!(sx > 0.0) || !(su > 0.0)) throw NumericError("covariance test: zero spread in x or residuals");
    rep.statistic = S / (sx * su);

    // Two-sided uses the alpha row; the lower one-sided test uses the lower
    // bound of the 2 alpha row.
    const double row_alpha = options.alternative == Alternative::TwoSided ? alpha : 2.0 * alpha;
    std::optional<CriticalRow> row;
    if (options.table) {
      if (const auto* r = options.table->find(row_alpha)) row = *r;
    }
    if (!row) {
      BrownianSimConfig sim = options.simulation;
      sim.sigma_x = 1.0;
      sim.sigma_u = 1.0;
      const auto table = critical_values(simulate_prop2_null(sim), {row_alpha},
                                         CriticalSource::Prop2Statistic, sim);
      row = table.rows.front();
    }
    if (options.alternative == Alternative::TwoSided) {
      rep.critical_values = CriticalBounds{row->lower, row->upper, alpha};
      rep.reject = rep.statistic < row->lower || rep.statistic > row->upper;
    } else {
      rep.critical_values = CriticalBounds{row->lower, std::numeric_limits<double>::infinity(), alpha};
      rep.reject = rep.statistic < row->lower;
    }
    return rep;
  }

  rep.statistic = S;
  JackknifeConfig jk = options.jackknife.value_or(JackknifeConfig::defaults_for(sample.size()));
  const auto replicates = jackknife_replicates(sample, jk, [&](const Sample& s) {
    return covariance_statistic(s, fit(s, config));
  });
  if (options.alternative == Alternative::TwoSided) {
    const auto [lo, hi] = jackknife_bounds(replicates, alpha);
    rep.critical_values = CriticalBounds{lo, hi, alpha};
    rep.reject = lo > 0.0 || hi < 0.0;
  } else {
    const auto [lo, hi] = jackknife_bounds(replicates, 2.0 * alpha);
    rep.critical_values = CriticalBounds{-std::numeric_limits<double>::infinity(), hi, alpha};
    rep.reject = hi < 0.0;
    (void)lo;
  }
  return rep;
}

IvScreeningResult iv_screening(const Sample& sample, const std::vector<std::vector<double>>& candidates,
                               const EstimatorConfig& config, const std::vector<std::string>& labels) {
  if (!labels.empty() && labels.size() != candidates.size()) {
    throw DataError("iv screening: one label per candidate expected");
  }
  IvScreeningResult out;
  auto evaluate = [&](const Sample& s, IvCandidateResult& r) {
    try {
      r.statistic = covariance_statistic(s, fit(s, config));
      r.abs_statistic = std::abs(r.statistic);
    } catch (const NumericError& e) {
      r.feasible = false;
      r.reason = e.what();
    }
  };

  IvCandidateResult base;
  base.label = "untransformed";
  evaluate(sample, base);
  out.ranking.push_back(base);

  const auto x = sample.x();
  const auto y = sample.y();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto& g = candidates[c];
    if (g.size() != sample.size()) {
      throw DataError("iv screening: candidate " + std::to_string(c + 1) + " has length " +
                      std::to_string(g.size()) + ", expected " + std::to_string(sample.size()));
    }
    IvCandidateResult r;
    r.candidate = c + 1;
    r.label = labels.empty() ? "candidate " + std::to_string(c + 1) : labels[c];
    std::vector<double> w(g.size()), z(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      w[i] = g[i] * x[i];
      z[i] = g[i] * y[i];
    }
    try {
      evaluate(Sample(std::move(w), std::move(z)), r);
    } catch (const DataError& e) {
      r.feasible = false;
      r.reason = e.what();
    }
    out.ranking.push_back(std::move(r));
  }

  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [](const IvCandidateResult& a, const IvCandidateResult& b) {
                     if (a.feasible != b.feasible) return a.feasible;
                     return a.feasible && a.abs_statistic < b.abs_statistic;
                   });
  if (!out.ranking.front().feasible) throw NumericError("iv screening: no feasible model");
  out.selected = 0;
  return out;
}

}  // namespace ewpo
