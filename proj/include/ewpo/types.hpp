#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ewpo {

/// Bad or inconsistent input data (lengths, non-finite values, missing columns).
class DataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The data are valid but the requested estimate is undefined on them
/// (all pairs degenerate, weights summing to zero, collinear regressors).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Paired observations (x_i, y_i) of the univariate model y = b0 + b1 x + u.
class Sample {
 public:
  Sample(std::vector<double> x, std::vector<double> y);

  std::span<const double> x() const { return x_; }
  std::span<const double> y() const { return y_; }
  std::size_t size() const { return x_.size(); }

  double mean_x() const;
  double mean_y() const;

  /// Observations at `indices`, in the given order.
  Sample subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

enum class PairKind { Adjacent, FullPairwise };

struct PairScheme {
  PairKind kind = PairKind::FullPairwise;
  bool sorted = false;

  friend bool operator==(const PairScheme&, const PairScheme&) = default;
};

enum class WeightKind { DeltaX, AbsDeltaX, Euclidean, SqrtAbsDeltaX };

enum class Method { WeightedAverage, QuadraticLoss };

/// How FitResult::beta0_hat is produced.
enum class InterceptMode {
  Means,             // ybar - b1 * xbar
  PairwiseWeighted,  // weighted average of pairwise intercepts
  Zero               // model without intercept, b0 fixed at 0
};

struct EstimatorConfig {
  PairScheme scheme{};
  WeightKind weight = WeightKind::AbsDeltaX;
  Method method = Method::WeightedAverage;
  InterceptMode intercept = InterceptMode::Means;

  friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

/// A pair of observations with i > j in the (possibly sorted) arrangement.
/// `orig_i`/`orig_j` index the unsorted sample; they equal i/j when unsorted.
struct PairIndex {
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t orig_i = 0;
  std::size_t orig_j = 0;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
};

struct FitResult {
  double beta0_hat = 0.0;
  double beta1_hat = 0.0;
  std::vector<double> residuals;
  EstimatorConfig config{};
  std::size_t n = 0;
  std::size_t dropped_pairs = 0;
  double x_mean = 0.0;
};

// Names used by the CLI, JSON reports and experiment specs.
std::string_view to_string(PairKind kind);
std::string_view to_string(WeightKind kind);
std::string_view to_string(Method method);
std::string_view to_string(InterceptMode mode);

PairKind parse_pair_kind(std::string_view name);
WeightKind parse_weight_kind(std::string_view name);
Method parse_method(std::string_view name);
InterceptMode parse_intercept_mode(std::string_view name);

}  // namespace ewpo
