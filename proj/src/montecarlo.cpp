#include "ewpo/montecarlo.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "ewpo/endogeneity.hpp"
#include "ewpo/estimators.hpp"
#include "ewpo/parallel.hpp"
#include "ewpo/rng.hpp"

namespace ewpo {

double XDist::mean() const { return kind == XDistKind::Uniform ? 0.5 * (a + b) : a; }

double XDist::sd() const { return kind == XDistKind::Uniform ? (b - a) / std::sqrt(12.0) : std::sqrt(b); }

void DgpSpec::validate() const {
  if (n < 2) throw DataError("dgp: n must be at least 2");
  if (!(std::abs(rho) < 1.0)) throw DataError("dgp: |rho| must be below 1");
  if (x.kind == XDistKind::Uniform && !(x.b > x.a)) throw DataError("dgp: uniform x needs a < b");
  if (x.kind == XDistKind::Normal && !(x.b > 0.0)) throw DataError("dgp: normal x needs a positive variance");
  if (!(u.variance > 0.0)) throw DataError("dgp: noise variance must be positive");
  if (u.kind == UDistKind::SkewedNormal && rho != 0.0) {
    throw DataError("dgp: correlation induction defined for normal noise only");
  }
}

Draw generate_draw(const DgpSpec& spec, std::uint64_t rep) {
  spec.validate();
  Engine eng = make_engine(spec.seed, rep);
  const std::size_t n = spec.n;
  std::vector<double> x(n), u(n), y(n);

  if (spec.x.kind == XDistKind::Uniform) {
    std::uniform_real_distribution<double> dist(spec.x.a, spec.x.b);
    for (auto& v : x) v = dist(eng);
  } else {
    std::normal_distribution<double> dist(spec.x.a, std::sqrt(spec.x.b));
    for (auto& v : x) v = dist(eng);
  }

  const double sd_u = std::sqrt(spec.u.variance);
  std::normal_distribution<double> std_normal;
  if (spec.u.kind == UDistKind::Normal) {
    for (auto& v : u) v = sd_u * std_normal(eng);
  } else {
    const double lambda = spec.u.lambda;
    const double xi = -lambda * std::sqrt(2.0 / std::numbers::pi);
    for (auto& v : u) {
      const double s = std_normal(eng);
      const double z = sd_u * std_normal(eng);
      v = xi + lambda * std::abs(s) + z;
    }
  }

  if (spec.rho != 0.0) {
    const double c = spec.rho * sd_u / spec.x.sd();
    const double mu = spec.x.mean();
    const double keep = std::sqrt(1.0 - spec.rho * spec.rho);
    for (std::size_t i = 0; i < n; ++i) u[i] = c * (x[i] - mu) + keep * u[i];
  }

  for (std::size_t i = 0; i < n; ++i) y[i] = spec.beta0 + spec.beta1 * x[i] + u[i];
  const double corr = correlation(x, u);
  return {Sample(std::move(x), std::move(y)), std::move(u), corr};
}

Sample generate(const DgpSpec& spec) { return generate_draw(spec, 0).sample; }

std::string_view to_string(Target target) {
  switch (target) {
    case Target::EstimatorDist:
      return "estimator";
    case Target::InterceptDist:
      return "intercept";
    case Target::CovStatDist:
      return "covstat";
    case Target::ResidualMeanDist:
      return "residual_mean";
    case Target::BiasCorrectedDist:
      return "bias_corrected";
  }
  return "?";
}

Target parse_target(std::string_view name) {
  for (Target t : {Target::EstimatorDist, Target::InterceptDist, Target::CovStatDist, Target::ResidualMeanDist,
                   Target::BiasCorrectedDist}) {
    if (to_string(t) == name) return t;
  }
  throw DataError("unknown target '" + std::string(name) +
                  "' (expected one of: estimator intercept covstat residual_mean bias_corrected)");
}

CellDraws run_cell(const DgpSpec& spec, const EstimatorConfig& config, Target target, std::size_t reps,
                   kernels::Backend backend) {
  spec.validate();
  EstimatorConfig cfg = config;
  if (target == Target::ResidualMeanDist || target == Target::BiasCorrectedDist) {
    cfg.intercept = InterceptMode::Zero;
  }
  CellDraws out;
  out.values.resize(reps);
  out.corr_xu.resize(reps);
  parallel_for(reps, [&](std::size_t r) {
    const Draw d = generate_draw(spec, r);
    const FitResult f = fit(d.sample, cfg, backend);
    double v = 0.0;
    switch (target) {
      case Target::EstimatorDist:
        v = f.beta1_hat;
        break;
      case Target::InterceptDist:
        v = f.beta0_hat;
        break;
      case Target::CovStatDist:
        v = covariance_statistic(d.sample, f);
        break;
      case Target::ResidualMeanDist:
        v = mean(f.residuals);
        break;
      case Target::BiasCorrectedDist:
        v = bias_corrected_slope(f);
        break;
    }
    out.values[r] = v;
    out.corr_xu[r] = d.corr_xu;
  });
  return out;
}

SummaryTable run_experiment(const std::vector<DgpSpec>& dgps, const EstimatorConfig& config, Target target,
                            std::size_t reps, kernels::Backend backend) {
  if (reps < 100) throw DataError("montecarlo: reps must be at least 100");
  SummaryTable table;
  table.target = target;
  table.config = config;
  table.reps = reps;
  for (const auto& spec : dgps) {
    const auto cell = run_cell(spec, config, target, reps, backend);
    SummaryRow row;
    row.n = spec.n;
    row.rho = spec.rho;
    if (spec.rho == 0.0) {
      row.label = "Exogen";
    } else {
      std::ostringstream os;
      os << spec.rho;
      row.label = os.str();
    }
    row.stats = describe(cell.values);
    row.mean_corr = mean(cell.corr_xu);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string SummaryTable::to_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "n,rho,label,mean,sd,variance,skewness,kurtosis,excess_kurtosis,mean_corr\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.rho << ',' << r.label << ',' << r.stats.mean << ',' << r.stats.sd << ','
       << r.stats.variance << ',' << r.stats.skewness << ',' << r.stats.kurtosis << ','
       << r.stats.kurtosis - 3.0 << ',' << r.mean_corr << '\n';
  }
  return os.str();
}

std::string SummaryTable::to_text() const {
  std::ostringstream os;
  os << "target " << ewpo::to_string(target) << ", " << ewpo::to_string(config.scheme.kind)
     << (config.scheme.sorted ? " sorted" : "") << ", weight " << ewpo::to_string(config.weight) << ", method "
     << ewpo::to_string(config.method) << ", reps " << reps << "\n";
  os << std::setw(7) << "n" << std::setw(9) << "rho" << std::setw(13) << "mean" << std::setw(12) << "sd"
     << std::setw(10) << "skew" << std::setw(10) << "kurt" << std::setw(11) << "corr" << "\n";
  os << std::fixed;
  for (const auto& r : rows) {
    os << std::setw(7) << r.n << std::setw(9) << r.label << std::setw(13) << std::setprecision(5) << r.stats.mean
       << std::setw(12) << std::setprecision(5) << r.stats.sd << std::setw(10) << std::setprecision(3)
       << r.stats.skewness << std::setw(10) << std::setprecision(3) << r.stats.kurtosis << std::setw(11)
       << std::setprecision(4) << r.mean_corr << "\n";
  }
  return os.str();
}

SummaryTable run_experiment(const ExperimentSpec& spec, kernels::Backend backend) {
  return run_experiment(spec.cells, spec.estimator, spec.target, spec.reps, backend);
}

}  // namespace ewpo
