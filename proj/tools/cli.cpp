#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "ewpo/dataset.hpp"
#include "ewpo/endogeneity.hpp"
#include "ewpo/estimators.hpp"
#include "ewpo/inference.hpp"
#include "ewpo/kernels.hpp"
#include "ewpo/montecarlo.hpp"
#include "ewpo/multivariate.hpp"

namespace ewpo::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataOpts {
  std::string path;
  std::string y = "y";
  std::vector<std::string> x{"x"};
};

struct EstOpts {
  std::string scheme = "full";
  bool sorted = false;
  std::string weight = "absdx";
  std::string method = "avg";
  std::string intercept;
  bool no_intercept = false;
};

struct Output {
  json config;
  json results;
  std::string text;
  std::string csv;
  std::uint64_t seed = 0;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

void add_data_options(CLI::App* cmd, DataOpts& d) {
  cmd->add_option("--data", d.path, "CSV file with a header row")->required();
  cmd->add_option("--y", d.y, "response column")->capture_default_str();
  cmd->add_option("--x", d.x, "regressor column(s)")->delimiter(',')->capture_default_str();
}

void add_estimator_options(CLI::App* cmd, EstOpts& e) {
  cmd->add_option("--scheme", e.scheme, "pairing scheme")
      ->check(CLI::IsMember({"adjacent", "full"}))
      ->capture_default_str();
  cmd->add_flag("--sorted", e.sorted, "sort observations by x before pairing");
  cmd->add_option("--weight", e.weight, "pair weight")
      ->check(CLI::IsMember({"dx", "absdx", "euclid", "sqrtabsdx"}))
      ->capture_default_str();
  cmd->add_option("--method", e.method, "weighted average or quadratic loss")
      ->check(CLI::IsMember({"avg", "loss"}))
      ->capture_default_str();
  cmd->add_option("--intercept", e.intercept, "intercept estimator: means (default), pairwise, zero")
      ->check(CLI::IsMember({"means", "pairwise", "zero"}));
  cmd->add_flag("--no-intercept", e.no_intercept, "fit the model without intercept (b0 = 0)");
}

EstimatorConfig resolve_estimator(const EstOpts& o, InterceptMode fallback) {
  EstimatorConfig c;
  c.scheme.kind = parse_pair_kind(o.scheme);
  c.scheme.sorted = o.sorted;
  c.weight = parse_weight_kind(o.weight);
  c.method = parse_method(o.method);
  if (o.no_intercept && !o.intercept.empty() && o.intercept != "zero") {
    throw UsageError("--no-intercept conflicts with --intercept " + o.intercept);
  }
  if (o.no_intercept) {
    c.intercept = InterceptMode::Zero;
  } else if (!o.intercept.empty()) {
    c.intercept = parse_intercept_mode(o.intercept);
  } else {
    c.intercept = fallback;
  }
  return c;
}

json config_json(const EstimatorConfig& c) {
  return {{"scheme", std::string(to_string(c.scheme.kind))},
          {"sorted", c.scheme.sorted},
          {"weight", std::string(to_string(c.weight))},
          {"method", std::string(to_string(c.method))},
          {"intercept", std::string(to_string(c.intercept))}};
}

json data_json(const DataOpts& d) { return {{"path", d.path}, {"y", d.y}, {"x", d.x}}; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const TestReport& r) {
  json j = {{"kind", std::string(to_string(r.kind))},
            {"null", std::string(to_string(r.null_source))},
            {"alternative", std::string(to_string(r.alternative))},
            {"weight", std::string(to_string(r.weight))},
            {"statistic", number_or_null(r.statistic)},
            {"delta_hat", optional_number(r.delta_hat)},
            {"p_value", optional_number(r.p_value)},
            {"warnings", r.warnings}};
  if (r.critical_values) {
    j["critical_values"] = {{"lower", number_or_null(r.critical_values->lower)},
                            {"upper", number_or_null(r.critical_values->upper)},
                            {"alpha", r.critical_values->alpha}};
    j["reject"] = *r.reject;
  } else {
    j["critical_values"] = nullptr;
    j["reject"] = nullptr;
  }
  return j;
}

Dataset load(const DataOpts& d, std::vector<std::string> extra = {}) {
  std::vector<std::string> cols = d.x;
  cols.insert(cols.end(), extra.begin(), extra.end());
  return parse_dataset_file(d.path, d.y, cols);
}

// ---------------------------------------------------------------------------

struct EstimateCmd {
  DataOpts data;
  EstOpts est;
  bool dense = false;
  bool with_residuals = false;

  Output run() const {
    const auto cfg = resolve_estimator(est, InterceptMode::Means);
    const auto ds = load(data);
    Output o;
    o.config = {{"data", data_json(data)}, {"estimator", config_json(cfg)}, {"dense", dense}};
    std::ostringstream text, csv;
    csv << "term,estimate\n";
    if (ds.x.size() == 1) {
      if (dense) throw UsageError("--dense applies to multivariate designs (more than one --x column)");
      const auto s = ds.to_sample();
      const auto f = fit(s, cfg);
      const auto u = describe(f.residuals);
      o.results = {{"n", f.n},
                   {"beta0_hat", f.beta0_hat},
                   {"beta1_hat", f.beta1_hat},
                   {"dropped_pairs", f.dropped_pairs},
                   {"residual_mean", u.mean},
                   {"residual_sd", u.sd}};
      if (with_residuals) o.results["residuals"] = f.residuals;
      text << "n              " << f.n << "\n"
           << "beta0_hat      " << fmt(f.beta0_hat) << "\n"
           << "beta1_hat      " << fmt(f.beta1_hat) << "\n"
           << "dropped_pairs  " << f.dropped_pairs << "\n"
           << "residual mean  " << fmt(u.mean) << "\n"
           << "residual sd    " << fmt(u.sd) << "\n";
      csv << "beta0," << fmt(f.beta0_hat) << "\nbeta1," << fmt(f.beta1_hat) << "\n";
    } else {
      if (cfg.intercept != InterceptMode::Means) {
        throw UsageError("multivariate fits recover the intercept from means; drop --intercept/--no-intercept");
      }
      const auto design = ds.to_design();
      const auto m = fit_multivariate(design, cfg, dense ? Representation::Dense : Representation::Implicit);
      json betas = json::object();
      text << "n              " << design.rows() << "\n"
           << "beta0_hat      " << fmt(m.beta0_hat) << "\n";
      csv << "beta0," << fmt(m.beta0_hat) << "\n";
      for (std::size_t k = 0; k < data.x.size(); ++k) {
        const double b = m.beta_hat(static_cast<Eigen::Index>(k));
        betas[data.x[k]] = b;
        text << "beta[" << data.x[k] << "]" << std::string(data.x[k].size() < 8 ? 8 - data.x[k].size() : 1, ' ')
             << fmt(b) << "\n";
        csv << data.x[k] << ',' << fmt(b) << "\n";
      }
      o.results = {{"n", design.rows()}, {"beta0_hat", m.beta0_hat}, {"beta_hat", betas}};
      if (with_residuals) {
        o.results["residuals"] = std::vector<double>(m.residuals.data(), m.residuals.data() + m.residuals.size());
      }
    }
    o.text = text.str();
    o.csv = csv.str();
    return o;
  }
};

CriticalValueTable load_cv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("critical-value table '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.contains("results") && j["results"].contains("table")) j = j["results"]["table"];
  if (!j.contains("rows") || !j["rows"].is_array()) throw DataError("critical-value table has no 'rows' array");
  CriticalValueTable t;
  t.source = CriticalSource::Prop2Statistic;
  if (j.contains("source") && j["source"] != "prop2") {
    throw DataError("critical-value table was not simulated from the Prop-2 statistic");
  }
  for (const auto& r : j["rows"]) {
    t.rows.push_back({r.at("alpha").get<double>(), r.at("lower").get<double>(), r.at("upper").get<double>()});
  }
  return t;
}

struct TestCmd {
  DataOpts data;
  EstOpts est;
  std::string kind;
  std::string null_name;
  std::string alternative = "two-sided";
  double alpha = 0.05;
  std::size_t steps = 2000;
  std::size_t sim_reps = 20000;
  std::size_t d = 0;
  std::size_t reps = 0;
  std::string cv_table;

  Output run(std::uint64_t seed) const {
    const Alternative alt = parse_alternative(alternative);
    Output o;
    o.seed = seed;
    std::ostringstream text, csv;
    TestReport rep;
    json extra = json::object();
    EstimatorConfig cfg;
    if (kind == "residual") {
      if (!null_name.empty() && null_name != "t") {
        throw UsageError("the residual test uses the Student-t reference; --null " + null_name +
                         " applies to --kind covariance");
      }
      if (!est.intercept.empty() && est.intercept != "zero") {
        throw UsageError("the residual test is valid only for the zero-intercept model (b0 = 0); "
                         "--intercept " + est.intercept + " conflicts with --kind residual");
      }
      cfg = resolve_estimator(est, InterceptMode::Zero);
      const auto s = load(data).to_sample();
      const auto f = fit(s, cfg);
      rep = residual_mean_test(s, f, alpha, alt);
      extra["beta1_hat"] = f.beta1_hat;
      if (f.x_mean != 0.0) extra["bias_corrected_slope"] = bias_corrected_slope(f);
    } else {
      const std::string nn = null_name.empty() ? "jackknife" : null_name;
      if (nn == "t") throw UsageError("--null t applies to --kind residual; use brownian or jackknife");
      if (est.method == "loss") {
        throw UsageError("--method loss satisfies the normal equations, which force S = 0; "
                         "the covariance test needs --method avg");
      }
      if (nn == "brownian" && est.weight != "dx") {
        throw UsageError("--null brownian conflicts with --weight " + est.weight +
                         ": the simulated Brownian null is derived for w = dx and may not be appropriate "
                         "for other weights; use --null jackknife");
      }
      cfg = resolve_estimator(est, InterceptMode::Means);
      const auto s = load(data).to_sample();
      CovarianceTestOptions opt;
      opt.alternative = alt;
      opt.simulation = BrownianSimConfig{steps, sim_reps, seed, 1.0, 1.0};
      CriticalValueTable table;
      if (!cv_table.empty()) {
        if (nn != "brownian") throw UsageError("--cv-table applies to --null brownian");
        table = load_cv_table(cv_table);
        opt.table = &table;
      }
      if (nn == "jackknife") {
        auto jk = JackknifeConfig::defaults_for(s.size(), seed);
        if (d) jk.d = d;
        if (reps) jk.R = reps;
        jk.alpha = alpha;
        opt.jackknife = jk;
        extra["jackknife"] = {{"d", jk.d}, {"R", jk.R}};
      }
      rep = covariance_test(s, cfg, alpha, parse_null_source(nn), opt);
    }

    o.config = {{"data", data_json(data)},       {"estimator", config_json(cfg)}, {"kind", kind},
                {"null", std::string(to_string(rep.null_source))}, {"alternative", alternative},
                {"alpha", alpha},                {"steps", steps},                {"sim_reps", sim_reps},
                {"d", d},                        {"reps", reps},                  {"cv_table", cv_table}};
    o.results = report_json(rep);
    o.results.update(extra);

    text << "test           " << to_string(rep.kind) << " (" << to_string(rep.null_source) << " null, "
         << to_string(rep.alternative) << ")\n"
         << "statistic      " << fmt(rep.statistic) << "\n";
    if (rep.critical_values) {
      text << "critical       [" << fmt(rep.critical_values->lower) << ", " << fmt(rep.critical_values->upper)
           << "] at alpha " << fmt(alpha) << "\n"
           << "reject         " << (*rep.reject ? "yes" : "no") << "\n";
    }
    if (rep.p_value) text << "p-value        " << fmt(*rep.p_value) << "\n";
    if (rep.delta_hat) text << "delta_hat      " << fmt(*rep.delta_hat) << "\n";
    if (extra.contains("bias_corrected_slope")) {
      text << "corrected b1   " << fmt(extra["bias_corrected_slope"].get<double>()) << "\n";
    }
    for (const auto& w : rep.warnings) text << "warning: " << w << "\n";

    csv << "kind,null,statistic,lower,upper,alpha,reject,p_value,delta_hat\n"
        << to_string(rep.kind) << ',' << to_string(rep.null_source) << ',' << fmt(rep.statistic) << ','
        << (rep.critical_values ? fmt(rep.critical_values->lower) : "") << ','
        << (rep.critical_values ? fmt(rep.critical_values->upper) : "") << ',' << fmt(alpha) << ','
        << (rep.reject ? (*rep.reject ? "1" : "0") : "") << ',' << (rep.p_value ? fmt(*rep.p_value) : "") << ','
        << (rep.delta_hat ? fmt(*rep.delta_hat) : "") << "\n";
    o.text = text.str();
    o.csv = csv.str();
    return o;
  }
};

struct JackknifeCmd {
  DataOpts data;
  EstOpts est;
  std::size_t d = 0;
  std::size_t reps = 10000;
  double alpha = 0.05;
  bool with_replicates = false;

  Output run(std::uint64_t seed) const {
    const auto cfg = resolve_estimator(est, InterceptMode::Means);
    const auto s = load(data).to_sample();
    auto jk = JackknifeConfig::defaults_for(s.size(), seed);
    if (d) jk.d = d;
    jk.R = reps;
    jk.alpha = alpha;
    const double estimate = estimate_slope(s, cfg);
    const auto res = jackknife_ci(s, cfg, jk);
    Output o;
    o.seed = seed;
    o.config = {{"data", data_json(data)}, {"estimator", config_json(cfg)}, {"d", jk.d},
                {"R", jk.R},               {"alpha", alpha}};
    o.results = {{"estimate", estimate}, {"lower", res.lower}, {"upper", res.upper}, {"d", jk.d}, {"R", jk.R}};
    if (with_replicates) o.results["replicates"] = res.replicates;
    std::ostringstream text, csv;
    text << "estimate       " << fmt(estimate) << "\n"
         << "interval       [" << fmt(res.lower) << ", " << fmt(res.upper) << "] at alpha " << fmt(alpha) << "\n"
         << "d, R           " << jk.d << ", " << jk.R << "\n";
    if (with_replicates) {
      csv << "replicate,value\n";
      for (std::size_t r = 0; r < res.replicates.size(); ++r) csv << r << ',' << fmt(res.replicates[r]) << "\n";
    } else {
      csv << "estimate,lower,upper,alpha,d,R\n"
          << fmt(estimate) << ',' << fmt(res.lower) << ',' << fmt(res.upper) << ',' << fmt(alpha) << ',' << jk.d
          << ',' << jk.R << "\n";
    }
    o.text = text.str();
    o.csv = csv.str();
    return o;
  }
};

struct SimulateCmd {
  int prop = 2;
  std::size_t steps = 10000;
  std::size_t reps = 50000;
  std::vector<double> alphas{0.01, 0.05, 0.10};
  double sigma_x = 1.0;
  double sigma_u = 1.0;
  std::string draws_path;

  Output run(std::uint64_t seed) const {
    const BrownianSimConfig cfg{steps, reps, seed, sigma_x, sigma_u};
    const auto draws = prop == 1 ? simulate_prop1_ratio(cfg) : simulate_prop2_null(cfg);
    const auto table = critical_values(draws, alphas,
                                       prop == 1 ? CriticalSource::Prop1Ratio : CriticalSource::Prop2Statistic, cfg);
    if (!draws_path.empty()) {
      std::ofstream f(draws_path);
      if (!f) throw DataError("cannot write '" + draws_path + "'");
      f << std::setprecision(17) << "draw\n";
      for (double v : draws) f << v << "\n";
    }
    Output o;
    o.seed = seed;
    o.config = {{"prop", prop},       {"steps", steps},     {"reps", reps},
                {"alphas", alphas},   {"sigma_x", sigma_x}, {"sigma_u", sigma_u}};
    o.results = {{"table", json::parse(to_json_string(table))}};
    std::ostringstream text;
    text << "Prop-" << prop << " critical values (steps " << steps << ", reps " << reps << ")\n"
         << std::setw(8) << "alpha" << std::setw(14) << "lower" << std::setw(14) << "upper" << "\n"
         << std::fixed;
    for (const auto& row : table.rows) {
      text << std::setw(8) << std::setprecision(3) << row.alpha << std::setw(14) << std::setprecision(4)
           << row.lower << std::setw(14) << row.upper << "\n";
    }
    o.text = text.str();
    o.csv = to_csv(table);
    return o;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct MonteCarloCmd {
  std::string spec_path;

  Output run(std::optional<std::uint64_t> seed_override) const {
    auto text = read_file(spec_path);
    if (seed_override) {
      auto j = json::parse(text, nullptr, false);
      if (j.is_discarded()) throw DataError("experiment spec is not valid JSON");
      j["seed"] = *seed_override;
      if (j.contains("cells")) {
        for (auto& c : j["cells"]) c.erase("seed");
      }
      text = j.dump();
    }
    const auto spec = parse_experiment_spec(text);
    const auto table = run_experiment(spec);
    Output o;
    o.seed = spec.seed;
    o.config = {{"spec_path", spec_path}, {"spec", json::parse(to_json_string(spec))}};
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"n", r.n},
                      {"rho", r.rho},
                      {"label", r.label},
                      {"mean", r.stats.mean},
                      {"sd", r.stats.sd},
                      {"variance", r.stats.variance},
                      {"skewness", r.stats.skewness},
                      {"kurtosis", r.stats.kurtosis},
                      {"mean_corr", r.mean_corr}});
    }
    o.results = {{"target", std::string(to_string(table.target))}, {"reps", table.reps}, {"rows", rows}};
    o.text = table.to_text();
    o.csv = table.to_csv();
    return o;
  }
};

struct IvScreenCmd {
  DataOpts data;
  EstOpts est;
  std::vector<std::string> candidates;

  Output run() const {
    if (data.x.size() != 1) throw UsageError("iv-screen takes exactly one --x column");
    const auto cfg = resolve_estimator(est, InterceptMode::Means);
    if (cfg.method == Method::QuadraticLoss) {
      throw UsageError("--method loss forces S = 0 for every model; iv-screen needs --method avg");
    }
    const auto ds = load(data, candidates);
    const Sample s(ds.x[0], ds.y);
    std::vector<std::vector<double>> g(ds.x.begin() + 1, ds.x.end());
    const auto res = iv_screening(s, g, cfg, candidates);
    Output o;
    o.config = {{"data", data_json(data)}, {"estimator", config_json(cfg)}, {"candidates", candidates}};
    json ranking = json::array();
    std::ostringstream text, csv;
    csv << "rank,label,feasible,statistic,abs_statistic,selected\n";
    text << std::setw(5) << "rank" << "  " << std::left << std::setw(16) << "model" << std::right << std::setw(16)
         << "S" << "\n";
    for (std::size_t r = 0; r < res.ranking.size(); ++r) {
      const auto& m = res.ranking[r];
      ranking.push_back({{"label", m.label},
                         {"candidate", m.candidate},
                         {"feasible", m.feasible},
                         {"statistic", m.feasible ? json(m.statistic) : json(nullptr)},
                         {"abs_statistic", m.feasible ? json(m.abs_statistic) : json(nullptr)},
                         {"reason", m.reason},
                         {"selected", r == res.selected}});
      csv << r + 1 << ',' << m.label << ',' << (m.feasible ? 1 : 0) << ',' << (m.feasible ? fmt(m.statistic) : "")
          << ',' << (m.feasible ? fmt(m.abs_statistic) : "") << ',' << (r == res.selected ? 1 : 0) << "\n";
      text << std::setw(5) << r + 1 << "  " << std::left << std::setw(16) << m.label << std::right << std::setw(16)
           << (m.feasible ? fmt(m.statistic) : "infeasible") << (r == res.selected ? "  <- selected" : "") << "\n";
    }
    o.results = {{"ranking", ranking}, {"selected", res.ranking[res.selected].label}};
    o.text = text.str();
    o.csv = csv.str();
    return o;
  }
};

std::vector<std::string> canonical_argv(const std::vector<std::string>& args, std::uint64_t seed, bool has_seed) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0) continue;
    out.push_back(args[i]);
  }
  if (!has_seed) {
    out.push_back("--seed");
    out.push_back(std::to_string(seed));
  }
  return out;
}

int configure_threads(int requested) {
  if (requested <= 0) {
    if (const char* env = std::getenv("EWPO_THREADS")) {
      try {
        requested = std::stoi(env);
      } catch (const std::exception&) {
        throw UsageError(std::string("EWPO_THREADS must be a positive integer, got '") + env + "'");
      }
    }
  }
  if (requested > 0) kernels::set_num_threads(requested);
  return kernels::num_threads();
}

int replay(const std::string& path, bool check, std::ostream& out, std::ostream& err) {
  json stored;
  try {
    stored = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw DataError("report '" + path + "' is not valid JSON: " + e.what());
  }
  if (!stored.contains("argv") || !stored["argv"].is_array()) throw DataError("report has no 'argv' array");
  std::vector<std::string> args{"ewpo"};
  for (const auto& a : stored["argv"]) args.push_back(a.get<std::string>());
  args.push_back("--out");
  args.push_back("json");
  std::ostringstream captured;
  const int code = run(args, captured, err);
  if (code != kOk) return code;
  json fresh = json::parse(captured.str());
  const bool same = fresh["results"] == stored["results"];
  fresh["replay"] = {{"source", path}, {"identical", same}};
  out << fresh.dump(2) << "\n";
  if (check && !same) {
    err << "error: replayed results differ from '" << path << "'\n";
    return kNumeric;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation with pairwise observations: estimators, endogeneity tests, jackknife "
               "intervals, Brownian critical values and Monte Carlo experiments"};
  app.name("ewpo");
  app.set_version_flag("--version", EWPO_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_format = "text";
  auto* seed_opt = app.add_option("--seed", seed, "master seed for all randomness")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (default: EWPO_THREADS or all cores)");
  app.add_option("--out", out_format, "output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();

  EstimateCmd est_cmd;
  auto* est = app.add_subcommand("estimate", "fit the univariate or multivariate estimator");
  add_data_options(est, est_cmd.data);
  add_estimator_options(est, est_cmd.est);
  est->add_flag("--dense", est_cmd.dense, "multivariate: explicit difference/annihilator matrices (n <= 512)");
  est->add_flag("--residuals", est_cmd.with_residuals, "include residuals in the JSON report");

  TestCmd test_cmd;
  auto* test = app.add_subcommand("test", "endogeneity tests");
  add_data_options(test, test_cmd.data);
  add_estimator_options(test, test_cmd.est);
  test->add_option("--kind", test_cmd.kind, "residual or covariance")
      ->required()
      ->check(CLI::IsMember({"residual", "covariance"}));
  test->add_option("--null", test_cmd.null_name, "t (residual), brownian or jackknife (covariance)")
      ->check(CLI::IsMember({"t", "brownian", "jackknife"}));
  test->add_option("--alternative", test_cmd.alternative, "two-sided or lower")
      ->check(CLI::IsMember({"two-sided", "lower"}))
      ->capture_default_str();
  test->add_option("--alpha", test_cmd.alpha, "significance level")
      ->check(CLI::Range(1e-6, 0.5))
      ->capture_default_str();
  test->add_option("--steps", test_cmd.steps, "Brownian null: random-walk steps")->capture_default_str();
  test->add_option("--sim-reps", test_cmd.sim_reps, "Brownian null: simulated draws")->capture_default_str();
  test->add_option("--cv-table", test_cmd.cv_table, "Brownian null: JSON table from simulate-cv --prop 2");
  test->add_option("--d", test_cmd.d, "jackknife null: deletions per replicate (default ceil(n/2))");
  test->add_option("--reps", test_cmd.reps, "jackknife null: replicates (default 10000)");

  JackknifeCmd jk_cmd;
  auto* jk = app.add_subcommand("jackknife", "delete-d jackknife interval for the slope");
  add_data_options(jk, jk_cmd.data);
  add_estimator_options(jk, jk_cmd.est);
  jk->add_option("--d", jk_cmd.d, "deletions per replicate (default ceil(n/2))");
  jk->add_option("--reps", jk_cmd.reps, "replicates R")->capture_default_str();
  jk->add_option("--alpha", jk_cmd.alpha, "1 - coverage")->check(CLI::Range(1e-6, 0.999999))->capture_default_str();
  jk->add_flag("--replicates", jk_cmd.with_replicates, "emit every replicate (JSON and CSV)");

  SimulateCmd sim_cmd;
  auto* sim = app.add_subcommand("simulate-cv", "simulate Brownian-functional critical values");
  sim->add_option("--prop", sim_cmd.prop, "1: ratio functional, 2: covariance-statistic null")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  sim->add_option("--steps", sim_cmd.steps, "random-walk steps per draw")->capture_default_str();
  sim->add_option("--reps", sim_cmd.reps, "draws")->capture_default_str();
  sim->add_option("--alphas", sim_cmd.alphas, "two-sided levels")->delimiter(',')->capture_default_str();
  sim->add_option("--sigma-x", sim_cmd.sigma_x, "scale of x (Prop-2 draws scale by sigma_x sigma_u)")
      ->capture_default_str();
  sim->add_option("--sigma-u", sim_cmd.sigma_u, "scale of u")->capture_default_str();
  sim->add_option("--draws", sim_cmd.draws_path, "write every draw to this CSV file");

  MonteCarloCmd mc_cmd;
  auto* mc = app.add_subcommand("montecarlo", "run a Monte Carlo experiment from a JSON spec");
  mc->add_option("--spec", mc_cmd.spec_path, "experiment spec (JSON)")->required();

  IvScreenCmd iv_cmd;
  auto* iv = app.add_subcommand("iv-screen", "rank instrument-transformed models by |S|");
  add_data_options(iv, iv_cmd.data);
  add_estimator_options(iv, iv_cmd.est);
  iv->add_option("--candidates", iv_cmd.candidates, "candidate columns g (z = g y, w = g x)")
      ->delimiter(',')
      ->required();

  std::string replay_path;
  bool replay_check = false;
  auto* rp = app.add_subcommand("replay", "re-run the command stored in a JSON report");
  rp->add_option("report", replay_path, "report written with --out json")->required();
  rp->add_flag("--check", replay_check, "exit 4 if the results differ");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  }

  try {
    if (rp->parsed()) return replay(replay_path, replay_check, out, err);

    const int used_threads = configure_threads(threads);
    const bool has_seed = seed_opt->count() > 0;
    const auto start = std::chrono::steady_clock::now();
    Output o;
    std::string command;
    if (est->parsed()) {
      command = "estimate";
      o = est_cmd.run();
      o.seed = seed;
    } else if (test->parsed()) {
      command = "test";
      o = test_cmd.run(seed);
    } else if (jk->parsed()) {
      command = "jackknife";
      o = jk_cmd.run(seed);
    } else if (sim->parsed()) {
      command = "simulate-cv";
      o = sim_cmd.run(seed);
    } else if (mc->parsed()) {
      command = "montecarlo";
      o = mc_cmd.run(has_seed ? std::optional<std::uint64_t>(seed) : std::nullopt);
    } else {
      command = "iv-screen";
      o = iv_cmd.run();
      o.seed = seed;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (out_format == "json") {
      const bool seed_in_argv = has_seed || command == "montecarlo";
      json report = {{"tool", "ewpo"},
                     {"version", EWPO_VERSION},
                     {"command", command},
                     {"argv", canonical_argv(args, seed, seed_in_argv)},
                     {"seed", o.seed},
                     {"threads", used_threads},
                     {"config", o.config},
                     {"results", o.results},
                     {"timing", {{"seconds", seconds}}}};
      out << report.dump(2) << "\n";
    } else if (out_format == "csv") {
      out << o.csv;
    } else {
      out << o.text;
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const nlohmann::json::exception& e) {
    err << "data error: " << e.what() << "\n";
    return kData;
  }
}

}  // namespace ewpo::cli
