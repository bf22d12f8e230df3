#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "ewpo/numeric.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

Sample::Sample(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw DataError("x and y differ in length (" + std::to_string(x_.size()) + " vs " +
                    std::to_string(y_.size()) + ")");
  }
  if (x_.size() < 2) throw DataError("insufficient observations: need at least 2");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw DataError("non-finite value at observation " + std::to_string(i));
    }
  }
}

double Sample::mean_x() const { return mean(x_); }
double Sample::mean_y() const { return mean(y_); }

Sample Sample::subset(std::span<const std::size_t> indices) const {
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(indices.size());
  ys.reserve(indices.size());
  for (std::size_t k : indices) {
    xs.push_back(x_.at(k));
    ys.push_back(y_.at(k));
  }
  return Sample(std::move(xs), std::move(ys));
}

Moments describe(std::span<const double> v) {
  Moments m;
  m.count = v.size();
  if (v.empty()) return m;
  m.mean = mean(v);
  CompensatedSum s2, s3, s4;
  for (double d : v) {
    const double c = d - m.mean;
    const double c2 = c * c;
    s2.add(c2);
    s3.add(c2 * c);
    s4.add(c2 * c2);
  }
  const double n = static_cast<double>(v.size());
  const double m2 = s2.value() / n;
  m.variance = v.size() > 1 ? s2.value() / (n - 1.0) : 0.0;
  m.sd = std::sqrt(m.variance);
  if (m2 > 0.0) {
    m.skewness = (s3.value() / n) / std::pow(m2, 1.5);
    m.kurtosis = (s4.value() / n) / (m2 * m2);
  }
  return m;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw DataError("quantile of an empty sample");
  p = std::clamp(p, 0.0, 1.0);
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw DataError("correlation needs two equal-length vectors");
  const double ma = mean(a);
  const double mb = mean(b);
  CompensatedSum sab, saa, sbb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab.add(da * db);
    saa.add(da * da);
    sbb.add(db * db);
  }
  return sab.value() / std::sqrt(saa.value() * sbb.value());
}

namespace {

template <typename E, std::size_t N>
E lookup(std::string_view name, const std::array<std::pair<std::string_view, E>, N>& table,
         const char* what) {
  for (const auto& [k, v] : table) {
    if (k == name) return v;
  }
  std::string msg = std::string("unknown ") + what + " '" + std::string(name) + "' (expected one of:";
  for (const auto& [k, v] : table) msg += " " + std::string(k);
  throw DataError(msg + ")");
}

constexpr std::array<std::pair<std::string_view, PairKind>, 2> kPairKinds{{
    {"adjacent", PairKind::Adjacent}, {"full", PairKind::FullPairwise}}};
constexpr std::array<std::pair<std::string_view, WeightKind>, 4> kWeights{{
    {"dx", WeightKind::DeltaX},
    {"absdx", WeightKind::AbsDeltaX},
    {"euclid", WeightKind::Euclidean},
    {"sqrtabsdx", WeightKind::SqrtAbsDeltaX}}};
constexpr std::array<std::pair<std::string_view, Method>, 2> kMethods{{
    {"avg", Method::WeightedAverage}, {"loss", Method::QuadraticLoss}}};
constexpr std::array<std::pair<std::string_view, InterceptMode>, 3> kIntercepts{{
    {"means", InterceptMode::Means},
    {"pairwise", InterceptMode::PairwiseWeighted},
    {"zero", InterceptMode::Zero}}};

template <typename E, std::size_t N>
std::string_view name_of(E value, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [k, v] : table) {
    if (v == value) return k;
  }
  return "?";
}

}  // namespace

std::string_view to_string(PairKind kind) { return name_of(kind, kPairKinds); }
std::string_view to_string(WeightKind kind) { return name_of(kind, kWeights); }
std::string_view to_string(Method method) { return name_of(method, kMethods); }
std::string_view to_string(InterceptMode mode) { return name_of(mode, kIntercepts); }

PairKind parse_pair_kind(std::string_view name) { return lookup(name, kPairKinds, "pair scheme"); }
WeightKind parse_weight_kind(std::string_view name) { return lookup(name, kWeights, "weight"); }
Method parse_method(std::string_view name) { return lookup(name, kMethods, "method"); }
InterceptMode parse_intercept_mode(std::string_view name) {
  return lookup(name, kIntercepts, "intercept mode");
}

}  // namespace ewpo
