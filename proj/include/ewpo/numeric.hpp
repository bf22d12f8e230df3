#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace ewpo {

/// Neumaier-compensated running sum. Error stays O(eps) instead of O(n eps),
/// which matters for the 10^7-term full-pairwise sums.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> v) {
  CompensatedSum s;
  for (double d : v) s.add(d);
  return s.value();
}

inline double mean(std::span<const double> v) {
  return v.empty() ? 0.0 : compensated_sum(v) / static_cast<double>(v.size());
}

/// Central moments of a sample, biased (1/n) normalisation except `variance`.
struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, 1/(n-1)
  double sd = 0.0;
  double skewness = 0.0;  // m3 / m2^{3/2}
  double kurtosis = 0.0;  // m4 / m2^2, raw (3 under normality)
};

Moments describe(std::span<const double> v);

/// Quantile with linear interpolation between order statistics,
/// h = (N - 1) p. `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);

/// Sample correlation of two equal-length vectors.
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace ewpo
