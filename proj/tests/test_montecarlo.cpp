#include "doctest.h"

#include <cmath>
#include <numbers>

#include "ewpo/montecarlo.hpp"
#include "oracles.hpp"

using namespace ewpo;

TEST_CASE("dgp validation") {
  DgpSpec d;
  d.rho = 1.0;
  CHECK_THROWS_AS(d.validate(), DataError);
  d.rho = 0.5;
  d.u.kind = UDistKind::SkewedNormal;
  CHECK_THROWS_WITH_AS(d.validate(), doctest::Contains("normal noise only"), DataError);
  d.rho = 0.0;
  CHECK_NOTHROW(d.validate());
  d.x = {XDistKind::Uniform, 1.0, 1.0};
  CHECK_THROWS_AS(d.validate(), DataError);
}

TEST_CASE("distribution moments") {
  const XDist u{XDistKind::Uniform, -10, 10};
  CHECK(u.mean() == 0.0);
  CHECK(u.sd() == doctest::Approx(20.0 / std::sqrt(12.0)));
  const XDist n{XDistKind::Normal, 5, 4};
  CHECK(n.mean() == 5.0);
  CHECK(n.sd() == 2.0);
}

TEST_CASE("generated sample follows the model") {
  DgpSpec d;
  d.beta0 = 1;
  d.beta1 = 0.5;
  d.n = 1000;
  d.seed = 4;
  const auto draw = generate_draw(d, 0);
  CHECK(draw.sample.size() == 1000);
  for (std::size_t i = 0; i < 1000; ++i) {
    CHECK(draw.sample.y()[i] == doctest::Approx(1 + 0.5 * draw.sample.x()[i] + draw.noise[i]));
    CHECK(draw.sample.x()[i] >= -10.0);
    CHECK(draw.sample.x()[i] <= 10.0);
  }
  CHECK(std::abs(draw.corr_xu) < 3.0 / std::sqrt(1000.0));
  CHECK(generate(d).x()[7] == draw.sample.x()[7]);
  CHECK(generate_draw(d, 1).sample.x()[0] != draw.sample.x()[0]);
}

TEST_CASE("skewed noise is centred") {
  DgpSpec d;
  d.u = {UDistKind::SkewedNormal, 1.0, 1.0};
  d.n = 200000;
  const auto draw = generate_draw(d, 0);
  const auto m = describe(draw.noise);
  CHECK(std::abs(m.mean) < 3 * m.sd / std::sqrt(200000.0));
  CHECK(m.skewness > 0.05);
  // Var = lambda^2 (1 - 2/pi) + 1
  CHECK(m.variance == doctest::Approx(1 + (1 - 2 / std::numbers::pi)).epsilon(0.05));
}

TEST_CASE("induced correlation") {
  DgpSpec d;
  d.x = {XDistKind::Normal, 0.0, 5.0};
  d.rho = 0.8;
  d.n = 5000;
  const auto draw = generate_draw(d, 0);
  CHECK(draw.corr_xu > 0.75);
  CHECK(draw.corr_xu < 0.85);
  d.x = {XDistKind::Uniform, -5, 5};
  d.rho = -0.5;
  CHECK(generate_draw(d, 2).corr_xu == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("experiment summary is reproducible") {
  DgpSpec d;
  d.n = 100;
  d.seed = 21;
  std::vector<DgpSpec> cells{d};
  d.rho = 0.5;
  cells.push_back(d);
  const auto a = run_experiment(cells, {}, Target::EstimatorDist, 200);
  const auto b = run_experiment(cells, {}, Target::EstimatorDist, 200);
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].stats.mean == b.rows[0].stats.mean);
  CHECK(a.rows[1].stats.kurtosis == b.rows[1].stats.kurtosis);
  CHECK(a.rows[0].label == "Exogen");
  CHECK(a.rows[1].label == "0.5");
  CHECK(a.rows[0].stats.mean == doctest::Approx(0.5).epsilon(0.02));
  CHECK(a.rows[1].mean_corr == doctest::Approx(0.5).epsilon(0.1));
  CHECK(a.to_csv().rfind("n,rho,label,mean,sd", 0) == 0);
  CHECK(a.to_text().find("Exogen") != std::string::npos);
  CHECK_THROWS_AS(run_experiment(cells, {}, Target::EstimatorDist, 99), DataError);
}

TEST_CASE("run_cell values follow the target definitions") {
  DgpSpec d;
  d.x = {XDistKind::Normal, 5.0, 4.0};
  d.beta0 = 0;
  d.n = 50;
  d.seed = 2;
  const auto est = run_cell(d, {}, Target::EstimatorDist, 10);
  const auto res = run_cell(d, {}, Target::ResidualMeanDist, 10);
  const auto cor = run_cell(d, {}, Target::BiasCorrectedDist, 10);
  for (int r = 0; r < 10; ++r) {
    const auto s = generate_draw(d, r).sample;
    const double b = oracle::pair_estimate(s, {false, false, 1, false});
    CHECK(oracle::rel_close(est.values[r], b, 1e-10));
    double m = 0;
    for (std::size_t i = 0; i < s.size(); ++i) m += s.y()[i] - b * s.x()[i];
    m /= s.size();
    CHECK(oracle::rel_close(res.values[r], m, 1e-9));
    CHECK(oracle::rel_close(cor.values[r], b + m / s.mean_x(), 1e-9));
  }
}

TEST_CASE("experiment spec parsing") {
  const std::string text = R"({
    "seed": 5, "reps": 300, "target": "covstat",
    "estimator": {"scheme": "full", "weight": "absdx", "method": "avg"},
    "normal_param": "sd",
    "dgp": {"beta0": 0, "beta1": 0.5, "x": {"dist": "normal", "a": 5, "b": 2}, "u": {"dist": "normal", "sd": 1}},
    "grid": {"n": [50, 100], "rho": [0, 0.2]}
  })";
  const auto spec = parse_experiment_spec(text);
  CHECK(spec.seed == 5);
  CHECK(spec.reps == 300);
  CHECK(spec.target == Target::CovStatDist);
  REQUIRE(spec.cells.size() == 4);
  CHECK(spec.cells[0].x.b == 4.0);  // sd 2 -> variance 4
  CHECK(spec.cells[1].rho == 0.2);
  CHECK(spec.cells[2].n == 100);
  CHECK(spec.cells[0].seed != spec.cells[1].seed);

  const auto again = parse_experiment_spec(to_json_string(spec));
  REQUIRE(again.cells.size() == 4);
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(again.cells[c].seed == spec.cells[c].seed);
    CHECK(again.cells[c].x.b == spec.cells[c].x.b);
    CHECK(again.cells[c].n == spec.cells[c].n);
  }
  CHECK(again.estimator == spec.estimator);

  CHECK_THROWS_AS(parse_experiment_spec("{"), DataError);
  CHECK_THROWS_AS(parse_experiment_spec(R"({"reps": 10})"), DataError);
  CHECK_THROWS_AS(parse_experiment_spec(R"({"target": "nope"})"), DataError);
  CHECK_THROWS_AS(parse_experiment_spec(R"({"normal_param": "stdev"})"), DataError);
  CHECK_THROWS_AS(parse_experiment_spec(R"({"dgp": {"rho": 0.3, "u": {"dist": "skewed"}}})"), DataError);
}
