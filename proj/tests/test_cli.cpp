#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ewpo/dataset.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

const std::string kData = EWPO_TEST_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ewpo");
  std::ostringstream out, err;
  const int code = ewpo::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("dataset parsing") {
  std::istringstream ok("a,\"b\",y\n1,2,3\n4,\"5\",6\n\n");
  const auto ds = ewpo::parse_dataset(ok, "y", {"b"});
  CHECK(ds.rows() == 2);
  CHECK(ds.x[0] == std::vector<double>{2, 5});
  CHECK(ds.y == std::vector<double>{3, 6});

  std::istringstream missing("x,y\n1,2\n3,4\n");
  CHECK_THROWS_WITH_AS(ewpo::parse_dataset(missing, "y", {"z"}), doctest::Contains("'z'"), ewpo::DataError);
  std::istringstream nan("x,y\n1,2\nNaN,3\n");
  CHECK_THROWS_WITH_AS(ewpo::parse_dataset(nan, "y", {"x"}), doctest::Contains("row 2"), ewpo::DataError);
  std::istringstream junk("x,y\n1,2\n3,abc\n");
  CHECK_THROWS_WITH_AS(ewpo::parse_dataset(junk, "y", {"x"}), doctest::Contains("abc"), ewpo::DataError);
  std::istringstream one("x,y\n1,2\n");
  CHECK_THROWS_AS(ewpo::parse_dataset(one, "y", {"x"}), ewpo::DataError);
  std::istringstream ragged("x,y\n1,2\n3\n");
  CHECK_THROWS_AS(ewpo::parse_dataset(ragged, "y", {"x"}), ewpo::DataError);
}

TEST_CASE("estimate on the noiseless line") {
  const auto r = cli({"estimate", "--data", kData + "/line.csv", "--scheme", "full", "--weight", "absdx",
                      "--method", "avg", "--out", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["results"]["beta1_hat"].get<double>() == doctest::Approx(2.0));
  CHECK(j["results"]["beta0_hat"].get<double>() == doctest::Approx(-1.0));
  CHECK(j["command"] == "estimate");
  CHECK(j["version"] == EWPO_VERSION);
  CHECK(j.contains("timing"));
  CHECK(j["config"]["estimator"]["weight"] == "absdx");
}

TEST_CASE("estimate text and csv output") {
  const auto t = cli({"estimate", "--data", kData + "/small.csv", "--weight", "dx"});
  REQUIRE(t.code == 0);
  CHECK(t.out.find("beta1_hat") != std::string::npos);
  const auto c = cli({"--out", "csv", "estimate", "--data", kData + "/small.csv", "--weight", "dx"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("term,estimate\nbeta0,", 0) == 0);
}

TEST_CASE("multivariate estimate") {
  for (const char* dense : {"", "--dense"}) {
    std::vector<std::string> args{"estimate", "--data", kData + "/plane.csv", "--x", "x1,x2", "--method", "loss",
                                  "--out", "json"};
    if (*dense) args.push_back(dense);
    const auto r = cli(args);
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["results"]["beta_hat"]["x1"].get<double>() == doctest::Approx(0.5).epsilon(0.15));
    CHECK(j["results"]["beta_hat"]["x2"].get<double>() == doctest::Approx(-2.0).epsilon(0.15));
  }
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"estimate"}).code == 2);
  CHECK(cli({"estimate", "--data", kData + "/line.csv", "--weight", "bogus"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
  const auto missing = cli({"estimate", "--data", kData + "/line.csv", "--x", "nope"});
  CHECK(missing.code == 3);
  CHECK(missing.err.find("nope") != std::string::npos);
  const auto nan = cli({"estimate", "--data", kData + "/nan.csv"});
  CHECK(nan.code == 3);
  CHECK(nan.err.find("row 2") != std::string::npos);
  CHECK(cli({"estimate", "--data", kData + "/does_not_exist.csv"}).code == 3);
  const auto ties = cli({"estimate", "--data", kData + "/ties.csv"});
  CHECK(ties.code == 4);
  CHECK(ties.err.find("degenerate") != std::string::npos);
}

TEST_CASE("flag conflicts are usage errors with a reason") {
  const auto r = cli({"test", "--data", kData + "/endog.csv", "--kind", "covariance", "--null", "brownian",
                      "--weight", "absdx"});
  CHECK(r.code == 2);
  CHECK(r.err.find("w = dx") != std::string::npos);
  CHECK(cli({"test", "--data", kData + "/endog.csv", "--kind", "residual", "--null", "jackknife"}).code == 2);
  CHECK(cli({"test", "--data", kData + "/endog.csv", "--kind", "residual", "--intercept", "means"}).code == 2);
  CHECK(cli({"test", "--data", kData + "/endog.csv", "--kind", "covariance", "--method", "loss"}).code == 2);
  CHECK(cli({"estimate", "--data", kData + "/line.csv", "--no-intercept", "--intercept", "pairwise"}).code == 2);
}

TEST_CASE("residual test end to end") {
  const auto r = cli({"test", "--data", kData + "/endog.csv", "--kind", "residual", "--out", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["results"]["kind"] == "residual");
  CHECK(j["results"]["null"] == "t");
  CHECK(j["results"]["reject"] == true);
  CHECK(j["results"]["bias_corrected_slope"].get<double>() == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("covariance test with the jackknife null end to end") {
  const auto r = cli({"--seed", "3", "test", "--data", kData + "/endog.csv", "--kind", "covariance", "--null",
                      "jackknife", "--reps", "200", "--out", "json"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["results"]["null"] == "jackknife");
  CHECK(j["results"]["critical_values"].is_object());
  CHECK(j["results"]["reject"].is_boolean());
  CHECK(j["results"]["jackknife"]["R"] == 200);
}

TEST_CASE("covariance test with the Brownian null and a saved table") {
  const std::string table = "cli_test_table.json";
  const auto sim = cli({"--seed", "4", "simulate-cv", "--prop", "2", "--steps", "200", "--reps", "2000",
                        "--alphas", "0.05,0.1", "--out", "json"});
  REQUIRE(sim.code == 0);
  {
    std::ofstream f(table);
    f << sim.out;
  }
  const auto r = cli({"test", "--data", kData + "/endog.csv", "--kind", "covariance", "--null", "brownian",
                      "--weight", "dx", "--alpha", "0.1", "--cv-table", table, "--out", "json"});
  std::remove(table.c_str());
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  const auto s = json::parse(sim.out);
  CHECK(j["results"]["critical_values"]["lower"] == s["results"]["table"]["rows"][1]["lower"]);
}

TEST_CASE("jackknife and simulate-cv outputs") {
  const auto jk = cli({"--out", "csv", "jackknife", "--data", kData + "/endog.csv", "--reps", "150"});
  REQUIRE(jk.code == 0);
  CHECK(jk.out.rfind("estimate,lower,upper,alpha,d,R\n", 0) == 0);
  const auto cv = cli({"--out", "csv", "simulate-cv", "--prop", "1", "--steps", "100", "--reps", "1000"});
  REQUIRE(cv.code == 0);
  CHECK(cv.out.rfind("alpha,lower,upper\n", 0) == 0);
  CHECK(cli({"simulate-cv", "--steps", "10"}).code == 3);
}

TEST_CASE("montecarlo and iv-screen") {
  const auto mc = cli({"montecarlo", "--spec", kData + "/spec_small.json", "--out", "json"});
  REQUIRE(mc.code == 0);
  const auto j = json::parse(mc.out);
  CHECK(j["results"]["rows"].size() == 4);
  CHECK(j["seed"] == 11);
  const auto iv = cli({"iv-screen", "--data", kData + "/endog.csv", "--candidates", "g", "--out", "json"});
  REQUIRE(iv.code == 0);
  const auto k = json::parse(iv.out);
  CHECK(k["results"]["ranking"].size() == 2);
}

TEST_CASE("reports replay to identical results") {
  const std::string path = "cli_test_report.json";
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"jackknife", "--data", kData + "/endog.csv", "--reps", "120", "--out", "json"},
        std::vector<std::string>{"--out", "json", "simulate-cv", "--steps", "100", "--reps", "1000", "--seed", "9"},
        std::vector<std::string>{"montecarlo", "--spec", kData + "/spec_small.json", "--out", "json"}}) {
    const auto first = cli(args);
    REQUIRE(first.code == 0);
    {
      std::ofstream f(path);
      f << first.out;
    }
    const auto again = cli({"replay", path, "--check"});
    CHECK(again.code == 0);
    const auto j = json::parse(again.out);
    CHECK(j["replay"]["identical"] == true);
    CHECK(j["results"] == json::parse(first.out)["results"]);
  }
  std::remove(path.c_str());
}
