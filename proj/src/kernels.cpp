#include "ewpo/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ewpo/numeric.hpp"
#include "ewpo/pairs.hpp"

namespace ewpo::kernels {
namespace {

struct Accumulator {
  CompensatedSum numerator;
  CompensatedSum denominator;
  CompensatedSum magnitude;
  CompensatedSum intercept;
  std::size_t used = 0;
  std::size_t dropped = 0;

  void merge(const Accumulator& o) {
    numerator.add(o.numerator);
    denominator.add(o.denominator);
    magnitude.add(o.magnitude);
    intercept.add(o.intercept);
    used += o.used;
    dropped += o.dropped;
  }

  PairSums result() const {
    return {numerator.value(), denominator.value(), magnitude.value(), intercept.value(), used,
            dropped};
  }
};

inline void accumulate_pair(std::span<const double> x, std::span<const double> y, std::size_t i,
                            std::size_t j, const PairSumRequest& rq, Accumulator& acc) {
  const double dx = x[i] - x[j];
  if (dx == 0.0) {
    ++acc.dropped;
    return;
  }
  const double dy = y[i] - y[j];
  const double slope = dy / dx;
  double v = weight_value(rq.weight, dx, dy);
  if (rq.method == Method::QuadraticLoss) {
    v *= v;
    acc.magnitude.add(v);
  } else {
    acc.magnitude.add(std::abs(v));
  }
  acc.numerator.add(v * slope);
  acc.denominator.add(v);
  if (rq.with_intercept) acc.intercept.add(v * (y[i] - slope * x[i]));
  ++acc.used;
}

inline void accumulate_row(std::span<const double> x, std::span<const double> y, std::size_t i,
                           const PairSumRequest& rq, Accumulator& acc) {
  if (rq.kind == PairKind::Adjacent) {
    accumulate_pair(x, y, i, i - 1, rq, acc);
  } else {
    for (std::size_t j = 0; j < i; ++j) accumulate_pair(x, y, i, j, rq, acc);
  }
}

void check_lengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("x and y differ in length");
}

}  // namespace

PairSums pair_sums_reference(std::span<const double> x, std::span<const double> y,
                             const PairSumRequest& request) {
  check_lengths(x, y);
  Accumulator acc;
  for (std::size_t i = 1; i < x.size(); ++i) accumulate_row(x, y, i, request, acc);
  return acc.result();
}

PairSums pair_sums_parallel(std::span<const double> x, std::span<const double> y,
                            const PairSumRequest& request) {
  check_lengths(x, y);
  const std::size_t n = x.size();
  if (n < 2) return {};
  const std::size_t rows = n - 1;
  const std::size_t chunks = (rows + kRowsPerChunk - 1) / kRowsPerChunk;
  std::vector<Accumulator> partial(chunks);

  // Full-pairwise rows grow linearly in length, hence the dynamic schedule.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t first = 1 + c * kRowsPerChunk;
    const std::size_t last = std::min(n, first + kRowsPerChunk);
    for (std::size_t i = first; i < last; ++i) accumulate_row(x, y, i, request, partial[c]);
  }

  Accumulator total;
  for (const auto& p : partial) total.merge(p);
  return total.result();
}

std::optional<PairSums> pair_sums_closed_form(std::span<const double> x, std::span<const double> y,
                                              const PairSumRequest& request) {
  check_lengths(x, y);
  if (request.kind != PairKind::FullPairwise || request.with_intercept) return std::nullopt;
  if (request.weight != WeightKind::DeltaX && request.weight != WeightKind::AbsDeltaX) {
    return std::nullopt;
  }
  const std::size_t n = x.size();
  if (n < 2) return PairSums{};

  // Tie groups of x, members in index order within each group.
  std::vector<std::size_t> by_x(n);
  std::iota(by_x.begin(), by_x.end(), std::size_t{0});
  std::stable_sort(by_x.begin(), by_x.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  // rank_coef[k] = #{x < x_k} - #{x > x_k}, so that
  //   sum_{pairs} |dx|           = sum_k rank_coef[k] x_k
  //   sum_{pairs} sgn(dx) dy     = sum_k rank_coef[k] y_k   (ties excluded)
  std::vector<double> rank_coef(n);
  std::size_t dropped = 0;
  CompensatedSum tied_dy;  // sum over tied pairs (i > j) of y_i - y_j
  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && x[by_x[end]] == x[by_x[start]]) ++end;
    const std::size_t g = end - start;
    const double coef = static_cast<double>(start) - static_cast<double>(n - end);
    for (std::size_t m = start; m < end; ++m) {
      rank_coef[by_x[m]] = coef;
      // stable sort keeps index order inside the group
      tied_dy.add((2.0 * static_cast<double>(m - start) - static_cast<double>(g) + 1.0) * y[by_x[m]]);
    }
    dropped += g * (g - 1) / 2;
    start = end;
  }

  PairSums out;
  out.dropped = dropped;
  out.used = n * (n - 1) / 2 - dropped;

  CompensatedSum abs_dx;
  for (std::size_t k = 0; k < n; ++k) abs_dx.add(rank_coef[k] * x[k]);

  if (request.method == Method::QuadraticLoss) {
    // sum_{i>j} dx dy = n sum (x - xbar)(y - ybar); degenerate pairs add zero.
    const double mx = mean(x);
    const double my = mean(y);
    CompensatedSum sxy, sxx;
    for (std::size_t k = 0; k < n; ++k) {
      const double cx = x[k] - mx;
      sxy.add(cx * (y[k] - my));
      sxx.add(cx * cx);
    }
    const double dn = static_cast<double>(n);
    out.numerator = dn * sxy.value();
    out.denominator = dn * sxx.value();
    out.magnitude = out.denominator;
    return out;
  }

  out.magnitude = abs_dx.value();
  if (request.weight == WeightKind::AbsDeltaX) {
    CompensatedSum num;
    for (std::size_t k = 0; k < n; ++k) num.add(rank_coef[k] * y[k]);
    out.numerator = num.value();
    out.denominator = out.magnitude;
  } else {
    // Signed dx in index order: coefficient of position k is k - (n - 1 - k).
    CompensatedSum num, den;
    for (std::size_t k = 0; k < n; ++k) {
      const double c = 2.0 * static_cast<double>(k) - static_cast<double>(n) + 1.0;
      num.add(c * y[k]);
      den.add(c * x[k]);
    }
    num.add(-tied_dy.value());
    out.numerator = num.value();
    out.denominator = den.value();
  }
  return out;
}

PairSums pair_sums(std::span<const double> x, std::span<const double> y,
                   const PairSumRequest& request, Backend backend) {
  switch (backend) {
    case Backend::Reference:
      return pair_sums_reference(x, y, request);
    case Backend::Parallel:
      return pair_sums_parallel(x, y, request);
    case Backend::Auto:
      break;
  }
  if (auto closed = pair_sums_closed_form(x, y, request)) return *closed;
  if (request.kind == PairKind::Adjacent) return pair_sums_reference(x, y, request);
  return pair_sums_parallel(x, y, request);
}

void set_num_threads(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int num_threads() { return omp_get_max_threads(); }

}  // namespace ewpo::kernels
