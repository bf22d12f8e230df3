#include "ewpo/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "json.hpp"

#include "ewpo/estimators.hpp"
#include "ewpo/numeric.hpp"
#include "ewpo/parallel.hpp"
#include "ewpo/rng.hpp"

namespace ewpo {

JackknifeConfig JackknifeConfig::defaults_for(std::size_t n, std::uint64_t seed) {
  JackknifeConfig jk;
  jk.d = (n + 1) / 2;
  jk.R = 10000;
  jk.seed = seed;
  return jk;
}

void JackknifeConfig::validate(std::size_t n) const {
  const double root = std::sqrt(static_cast<double>(n));
  if (!(static_cast<double>(d) > root)) {
    throw DataError("jackknife: d = " + std::to_string(d) + " must exceed sqrt(n) = " +
                    std::to_string(root));
  }
  if (d >= n) throw DataError("jackknife: d = " + std::to_string(d) + " must be below n = " + std::to_string(n));
  if (n - d < 2) throw DataError("jackknife: subsamples of n - d < 2 observations cannot be fitted");
  if (R < 100) throw DataError("jackknife: R = " + std::to_string(R) + " must be at least 100");
  // C(n, d) built up exactly; stop once it passes R.
  std::uint64_t comb = 1;
  const std::size_t small = std::min(d, n - d);
  for (std::size_t i = 1; i <= small && comb <= R; ++i) comb = comb * (n - small + i) / i;
  if (comb <= R) {
    throw DataError("jackknife: R = " + std::to_string(R) + " must be below C(n, n - d)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("jackknife: alpha must lie in (0, 1)");
}

std::vector<std::size_t> jackknife_subsample(std::size_t n, std::size_t d, std::uint64_t seed,
                                             std::size_t r) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Engine eng = make_engine(seed, r);
  const std::size_t keep = n - d;
  for (std::size_t t = 0; t < keep; ++t) {
    std::uniform_int_distribution<std::size_t> pick(t, n - 1);
    std::swap(idx[t], idx[pick(eng)]);
  }
  idx.resize(keep);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<double> jackknife_replicates(const Sample& sample, const JackknifeConfig& jk,
                                         const SampleStatistic& statistic) {
  jk.validate(sample.size());
  std::vector<double> out(jk.R);
  parallel_for(jk.R, [&](std::size_t r) {
    const auto keep = jackknife_subsample(sample.size(), jk.d, jk.seed, r);
    out[r] = statistic(sample.subset(keep));
  });
  return out;
}

std::pair<double, double> jackknife_bounds(std::vector<double> replicates, double alpha) {
  if (replicates.empty()) throw DataError("jackknife: no replicates");
  std::sort(replicates.begin(), replicates.end());
  const double R = static_cast<double>(replicates.size());
  auto lo = static_cast<std::size_t>(std::floor(alpha / 2.0 * R));
  auto hi = static_cast<std::size_t>(std::ceil((1.0 - alpha / 2.0) * R));
  lo = std::clamp<std::size_t>(lo, 1, replicates.size());
  hi = std::clamp<std::size_t>(hi, 1, replicates.size());
  return {replicates[lo - 1], replicates[hi - 1]};
}

JackknifeResult jackknife_ci(const Sample& sample, const EstimatorConfig& config,
                             const JackknifeConfig& jk, kernels::Backend backend) {
  JackknifeResult res;
  res.replicates = jackknife_replicates(
      sample, jk, [&](const Sample& s) { return estimate_slope(s, config, backend); });
  std::tie(res.lower, res.upper) = jackknife_bounds(res.replicates, jk.alpha);
  return res;
}

void BrownianSimConfig::validate() const {
  if (steps < 100) throw DataError("brownian simulation: steps must be at least 100");
  if (reps < 1000) throw DataError("brownian simulation: reps must be at least 1000");
  if (!(sigma_x > 0.0) || !(sigma_u > 0.0)) throw DataError("brownian simulation: sigmas must be positive");
}

double BrownianFunctionals::prop1_ratio() const { return (W1 - 2.0 * int_W) / (B1 - 2.0 * int_B); }

double BrownianFunctionals::prop2_statistic() const {
  return B1 * W1 + int_BW - int_B_dW - int_W_dB - B1 * B1 * prop1_ratio();
}

BrownianFunctionals simulate_functionals(std::size_t steps, std::uint64_t seed, std::size_t rep) {
  Engine eng = make_engine(seed, rep);
  std::normal_distribution<double> normal;
  const double scale = 1.0 / std::sqrt(static_cast<double>(steps));
  double B = 0.0, W = 0.0;
  double sum_B = 0.0, sum_W = 0.0, sum_BW = 0.0, ito_BdW = 0.0, ito_WdB = 0.0;
  for (std::size_t p = 0; p < steps; ++p) {
    const double dB = normal(eng) * scale;
    const double dW = normal(eng) * scale;
    ito_BdW += B * dW;
    ito_WdB += W * dB;
    B += dB;
    W += dW;
    sum_B += B;
    sum_W += W;
    sum_BW += B * W;
  }
  const double inv = 1.0 / static_cast<double>(steps);
  return {B, W, sum_B * inv, sum_W * inv, sum_BW * inv, ito_BdW, ito_WdB};
}

std::vector<BrownianFunctionals> simulate_functional_draws(const BrownianSimConfig& cfg) {
  cfg.validate();
  std::vector<BrownianFunctionals> out(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t r) { out[r] = simulate_functionals(cfg.steps, cfg.seed, r); });
  return out;
}

namespace {

template <typename F>
std::vector<double> draw_parallel(const BrownianSimConfig& cfg, F&& f) {
  cfg.validate();
  std::vector<double> out(cfg.reps);
  parallel_for(cfg.reps, [&](std::size_t r) { out[r] = f(simulate_functionals(cfg.steps, cfg.seed, r)); });
  return out;
}

template <typename F>
std::vector<double> draw_serial(const BrownianSimConfig& cfg, F&& f) {
  cfg.validate();
  std::vector<double> out(cfg.reps);
  for (std::size_t r = 0; r < cfg.reps; ++r) out[r] = f(simulate_functionals(cfg.steps, cfg.seed, r));
  return out;
}

}  // namespace

std::vector<double> simulate_prop1_ratio(const BrownianSimConfig& cfg) {
  return draw_parallel(cfg, [](const BrownianFunctionals& b) { return b.prop1_ratio(); });
}

std::vector<double> simulate_prop2_null(const BrownianSimConfig& cfg) {
  const double scale = cfg.sigma_x * cfg.sigma_u;
  return draw_parallel(cfg, [scale](const BrownianFunctionals& b) { return scale * b.prop2_statistic(); });
}

std::vector<double> simulate_prop1_ratio_serial(const BrownianSimConfig& cfg) {
  return draw_serial(cfg, [](const BrownianFunctionals& b) { return b.prop1_ratio(); });
}

std::vector<double> simulate_prop2_null_serial(const BrownianSimConfig& cfg) {
  const double scale = cfg.sigma_x * cfg.sigma_u;
  return draw_serial(cfg, [scale](const BrownianFunctionals& b) { return scale * b.prop2_statistic(); });
}

const CriticalRow* CriticalValueTable::find(double alpha) const {
  for (const auto& row : rows) {
    if (std::abs(row.alpha - alpha) < 1e-12) return &row;
  }
  return nullptr;
}

CriticalValueTable critical_values(std::vector<double> draws, const std::vector<double>& alphas,
                                   CriticalSource source, const BrownianSimConfig& config) {
  if (draws.empty()) throw DataError("critical values: no draws");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 0.5)) throw DataError("critical values: alpha must lie in (0, 0.5)");
  }
  std::sort(draws.begin(), draws.end());
  CriticalValueTable table;
  table.source = source;
  table.config = config;
  for (double a : alphas) {
    table.rows.push_back({a, quantile_sorted(draws, a / 2.0), quantile_sorted(draws, 1.0 - a / 2.0)});
  }
  std::sort(table.rows.begin(), table.rows.end(),
            [](const CriticalRow& l, const CriticalRow& r) { return l.alpha < r.alpha; });
  return table;
}

std::string_view to_string(CriticalSource source) {
  switch (source) {
    case CriticalSource::Prop1Ratio:
      return "prop1";
    case CriticalSource::Prop2Statistic:
      return "prop2";
    case CriticalSource::Other:
      break;
  }
  return "other";
}

std::string to_csv(const CriticalValueTable& table) {
  std::ostringstream os;
  os.precision(17);
  os << "alpha,lower,upper\n";
  for (const auto& row : table.rows) os << row.alpha << ',' << row.lower << ',' << row.upper << '\n';
  return os.str();
}

std::string to_json_string(const CriticalValueTable& table) {
  nlohmann::json j;
  j["source"] = std::string(to_string(table.source));
  j["config"] = {{"steps", table.config.steps},
                 {"reps", table.config.reps},
                 {"seed", table.config.seed},
                 {"sigma_x", table.config.sigma_x},
                 {"sigma_u", table.config.sigma_u}};
  j["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    j["rows"].push_back({{"alpha", row.alpha}, {"lower", row.lower}, {"upper", row.upper}});
  }
  return j.dump(2);
}

}  // namespace ewpo
