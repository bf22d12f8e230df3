#include "doctest.h"

#include <random>

#include "ewpo/kernels.hpp"
#include "ewpo/pairs.hpp"
#include "oracles.hpp"

using namespace ewpo;
using namespace ewpo::kernels;

namespace {

void check_close(const PairSums& a, const PairSums& b, double tol) {
  CHECK(oracle::rel_close(a.numerator, b.numerator, tol));
  CHECK(oracle::rel_close(a.denominator, b.denominator, tol));
  CHECK(oracle::rel_close(a.magnitude, b.magnitude, tol));
  CHECK(a.used == b.used);
  CHECK(a.dropped == b.dropped);
}

}  // namespace

TEST_CASE("closed form matches the pair loop, with and without ties") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 2 + rng() % 300;
    const bool ties = rep % 2 == 1;
    const auto s = oracle::random_sample(rng, n, 0.5, ties);
    for (auto w : {WeightKind::DeltaX, WeightKind::AbsDeltaX}) {
      for (auto m : {Method::WeightedAverage, Method::QuadraticLoss}) {
        for (bool sorted : {false, true}) {
          const Sample a = arranged(s, sorted);
          const PairSumRequest rq{PairKind::FullPairwise, w, m, false};
          const auto ref = pair_sums_reference(a.x(), a.y(), rq);
          const auto closed = pair_sums_closed_form(a.x(), a.y(), rq);
          REQUIRE(closed.has_value());
          check_close(*closed, ref, 1e-10);
        }
      }
    }
  }
}

TEST_CASE("closed form counts tied pairs as dropped") {
  const std::vector<double> x{1, 1, 1, 2, 2, 3};
  const std::vector<double> y{0, 1, 2, 3, 4, 5};
  const auto cf = pair_sums_closed_form(x, y, {PairKind::FullPairwise, WeightKind::DeltaX, Method::WeightedAverage});
  REQUIRE(cf);
  CHECK(cf->dropped == 3 + 1);
  CHECK(cf->used == 15 - 4);
}

TEST_CASE("no closed form for other requests") {
  const std::vector<double> x{0, 1, 2}, y{0, 1, 2};
  CHECK_FALSE(pair_sums_closed_form(x, y, {PairKind::Adjacent, WeightKind::DeltaX, Method::WeightedAverage}));
  CHECK_FALSE(pair_sums_closed_form(x, y, {PairKind::FullPairwise, WeightKind::Euclidean, Method::WeightedAverage}));
  CHECK_FALSE(pair_sums_closed_form(x, y, {PairKind::FullPairwise, WeightKind::AbsDeltaX, Method::WeightedAverage, true}));
}

TEST_CASE("parallel kernel agrees with the serial reference") {
  std::mt19937_64 rng(5);
  for (std::size_t n : {2u, 3u, 64u, 65u, 129u, 700u}) {
    const auto s = oracle::random_sample(rng, n, 0.5, n == 700);
    for (auto kind : {PairKind::Adjacent, PairKind::FullPairwise}) {
      for (auto w : {WeightKind::DeltaX, WeightKind::AbsDeltaX, WeightKind::Euclidean, WeightKind::SqrtAbsDeltaX}) {
        const PairSumRequest rq{kind, w, Method::WeightedAverage, true};
        const auto ref = pair_sums_reference(s.x(), s.y(), rq);
        const auto par = pair_sums_parallel(s.x(), s.y(), rq);
        check_close(par, ref, 1e-13);
        CHECK(oracle::rel_close(par.intercept_numerator, ref.intercept_numerator, 1e-12));
      }
    }
  }
}

TEST_CASE("parallel kernel is bit-identical across thread counts") {
  std::mt19937_64 rng(9);
  const auto s = oracle::random_sample(rng, 1000);
  const PairSumRequest rq{PairKind::FullPairwise, WeightKind::Euclidean, Method::QuadraticLoss, true};
  const int before = num_threads();
  set_num_threads(1);
  const auto one = pair_sums_parallel(s.x(), s.y(), rq);
  set_num_threads(4);
  const auto four = pair_sums_parallel(s.x(), s.y(), rq);
  set_num_threads(before);
  CHECK(one.numerator == four.numerator);
  CHECK(one.denominator == four.denominator);
  CHECK(one.intercept_numerator == four.intercept_numerator);
}

TEST_CASE("auto backend dispatch") {
  std::mt19937_64 rng(2);
  const auto s = oracle::random_sample(rng, 200);
  for (auto kind : {PairKind::Adjacent, PairKind::FullPairwise}) {
    for (auto w : {WeightKind::DeltaX, WeightKind::Euclidean}) {
      const PairSumRequest rq{kind, w, Method::WeightedAverage, false};
      check_close(pair_sums(s.x(), s.y(), rq, Backend::Auto), pair_sums_reference(s.x(), s.y(), rq), 1e-10);
    }
  }
}

TEST_CASE("length mismatch") {
  const std::vector<double> x{0, 1, 2}, y{0, 1};
  CHECK_THROWS_AS(pair_sums_reference(x, y, {}), DataError);
}
