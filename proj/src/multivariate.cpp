#include "ewpo/multivariate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ewpo/estimators.hpp"
#include "ewpo/numeric.hpp"
#include "ewpo/pairs.hpp"

namespace ewpo {
namespace {

constexpr double kRankTolerance = 1e-10;

/// [1, X without column k]; k < 0 keeps every column.
Eigen::MatrixXd with_constant(const Eigen::MatrixXd& X, Eigen::Index k) {
  const Eigen::Index keep = k < 0 ? X.cols() : X.cols() - 1;
  Eigen::MatrixXd A(X.rows(), keep + 1);
  A.col(0).setOnes();
  Eigen::Index c = 1;
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    if (j != k) A.col(c++) = X.col(j);
  }
  return A;
}

void require_full_rank(const Eigen::MatrixXd& A, const char* what) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return;
  const double largest = s(0);
  const double smallest = s(s.size() - 1);
  if (!(largest > 0.0) || smallest / largest <= kRankTolerance) {
    throw NumericError(std::string("collinear regressors: ") + what +
                       " is numerically rank deficient");
  }
}

void check_index(const Eigen::MatrixXd& X, Eigen::Index k) {
  if (k < 0 || k >= X.cols()) throw DataError("regressor index out of range");
}

struct Accum {
  CompensatedSum num;
  CompensatedSum den;
  CompensatedSum mag;
  std::size_t used = 0;
  std::size_t dropped = 0;
};

}  // namespace

DesignMatrix::DesignMatrix(Eigen::MatrixXd X, Eigen::VectorXd y) : X_(std::move(X)), y_(std::move(y)) {
  if (X_.rows() != y_.size()) throw DataError("design matrix and response differ in length");
  if (X_.cols() < 1) throw DataError("design matrix needs at least one regressor");
  if (X_.rows() <= X_.cols() + 1) {
    throw DataError("insufficient observations: need n > K + 1 (n = " + std::to_string(X_.rows()) +
                    ", K = " + std::to_string(X_.cols()) + ")");
  }
  if (!X_.allFinite() || !y_.allFinite()) throw DataError("design matrix contains non-finite values");
  require_full_rank(with_constant(X_, -1), "[1, X]");
}

Eigen::VectorXd DifferenceOperator::apply(const Eigen::VectorXd& v) const {
  if (static_cast<std::size_t>(v.size()) != n) throw DataError("vector length does not match operator");
  if (representation == Representation::Dense) return matrix * v;
  const auto pairs = enumerate_pairs({scheme.kind, false}, std::span<const double>(v.data(), n));
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) out(static_cast<Eigen::Index>(p)) = v(pairs[p].i) - v(pairs[p].j);
  return out;
}

DifferenceOperator build_difference_matrix(const PairScheme& scheme, std::size_t n, std::size_t guard) {
  if (n < 2) throw DataError("insufficient observations: need at least 2");
  if (n > guard) {
    throw DataError("n = " + std::to_string(n) + " exceeds the dense difference-matrix guard (" +
                    std::to_string(guard) + "); use the implicit representation");
  }
  DifferenceOperator op{scheme, n, Representation::Dense, {}};
  const auto rows = static_cast<Eigen::Index>(pair_count(scheme.kind, n));
  op.matrix = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n));
  Eigen::Index r = 0;
  auto put = [&](std::size_t i, std::size_t j) {
    op.matrix(r, static_cast<Eigen::Index>(i)) = 1.0;
    op.matrix(r, static_cast<Eigen::Index>(j)) = -1.0;
    ++r;
  };
  if (scheme.kind == PairKind::Adjacent) {
    for (std::size_t i = 1; i < n; ++i) put(i, i - 1);
  } else {
    for (std::size_t i = 1; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) put(i, j);
    }
  }
  return op;
}

Eigen::MatrixXd selection_matrix(const Eigen::VectorXd& x) {
  const auto order = arrangement(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())), true);
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(x.size(), x.size());
  for (std::size_t r = 0; r < order.size(); ++r) S(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(order[r])) = 1.0;
  return S;
}

Eigen::MatrixXd residual_maker(const Eigen::MatrixXd& X, Eigen::Index k) {
  check_index(X, k);
  const Eigen::MatrixXd A = with_constant(X, k);
  require_full_rank(A, "X without regressor k");
  // M = I - A (A'A)^-1 A' = I - Q Q' with Q an orthonormal basis of col(A).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  Eigen::MatrixXd M = -Q * Q.transpose();
  M.diagonal().array() += 1.0;
  return M;
}

Eigen::VectorXd partial_out(const Eigen::MatrixXd& X, Eigen::Index k, const Eigen::VectorXd& v) {
  check_index(X, k);
  if (v.size() != X.rows()) throw DataError("vector length does not match design rows");
  const Eigen::MatrixXd A = with_constant(X, k);
  require_full_rank(A, "X without regressor k");
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(v);
  return v - A * coef;
}

std::vector<double> multivariate_pairwise_parameters(const DesignMatrix& design, Eigen::Index k,
                                                     const PairScheme& scheme,
                                                     Representation representation) {
  const auto& X = design.X();
  if (representation == Representation::Implicit) {
    const Eigen::VectorXd xt = partial_out(X, k, X.col(k));
    const Eigen::VectorXd yt = partial_out(X, k, design.y());
    const Sample s(std::vector<double>(xt.data(), xt.data() + xt.size()),
                   std::vector<double>(yt.data(), yt.data() + yt.size()));
    return pairwise_parameters(s, scheme);
  }
  check_index(X, k);
  const auto n = static_cast<std::size_t>(X.rows());
  const Eigen::MatrixXd M = residual_maker(X, k);
  Eigen::VectorXd xt = M * X.col(k);
  Eigen::VectorXd yt = M * design.y();
  if (scheme.sorted) {
    const Eigen::MatrixXd S = selection_matrix(xt);
    xt = S * xt;
    yt = S * yt;
  }
  const auto D = build_difference_matrix({scheme.kind, false}, n);
  const Eigen::VectorXd dx = D.matrix * xt;
  const Eigen::VectorXd dy = D.matrix * yt;
  std::vector<double> out(static_cast<std::size_t>(dx.size()));
  for (Eigen::Index r = 0; r < dx.size(); ++r) {
    out[static_cast<std::size_t>(r)] = dx(r) == 0.0 ? std::numeric_limits<double>::quiet_NaN() : dy(r) / dx(r);
  }
  return out;
}

MultiFitResult fit_multivariate(const DesignMatrix& design, const EstimatorConfig& config,
                                Representation representation, kernels::Backend backend) {
  const auto& X = design.X();
  const auto& y = design.y();
  const Eigen::Index K = X.cols();
  const auto n = static_cast<std::size_t>(X.rows());

  EstimatorConfig through_origin = config;
  through_origin.intercept = InterceptMode::Zero;

  MultiFitResult out;
  out.beta_hat.resize(K);
  out.per_regressor.resize(static_cast<std::size_t>(K));

  for (Eigen::Index k = 0; k < K; ++k) {
    if (representation == Representation::Implicit) {
      const Eigen::VectorXd xt = partial_out(X, k, X.col(k));
      const Eigen::VectorXd yt = partial_out(X, k, y);
      const Sample s(std::vector<double>(xt.data(), xt.data() + xt.size()),
                     std::vector<double>(yt.data(), yt.data() + yt.size()));
      auto f = fit(s, through_origin, backend);
      out.beta_hat(k) = f.beta1_hat;
      out.per_regressor[static_cast<std::size_t>(k)] = std::move(f);
      continue;
    }

    // Dense pipeline: explicit M_k, S(M_k x_k) and D.
    const Eigen::MatrixXd M = residual_maker(X, k);
    Eigen::VectorXd xt = M * X.col(k);
    Eigen::VectorXd yt = M * y;
    const Eigen::VectorXd xt_orig = xt;
    const Eigen::VectorXd yt_orig = yt;
    if (config.scheme.sorted) {
      const Eigen::MatrixXd S = selection_matrix(xt);
      xt = S * xt;
      yt = S * yt;
    }
    const auto D = build_difference_matrix({config.scheme.kind, false}, n);
    const Eigen::VectorXd dx = D.matrix * xt;
    const Eigen::VectorXd dy = D.matrix * yt;
    Accum acc;
    for (Eigen::Index r = 0; r < dx.size(); ++r) {
      if (dx(r) == 0.0) {
        ++acc.dropped;
        continue;
      }
      const double b = dy(r) / dx(r);
      double v = weight_value(config.weight, dx(r), dy(r));
      if (config.method == Method::QuadraticLoss) v *= v;
      acc.num.add(v * b);
      acc.den.add(v);
      acc.mag.add(std::abs(v));
      ++acc.used;
    }
    if (acc.used == 0) throw NumericError("all pairs are degenerate (partialled regressor is constant)");
    if (std::abs(acc.den.value()) <= 1e-14 * acc.mag.value()) throw NumericError("weights sum to zero");

    FitResult f;
    f.config = through_origin;
    f.n = n;
    f.beta1_hat = acc.num.value() / acc.den.value();
    f.dropped_pairs = acc.dropped;
    const Eigen::VectorXd r = yt_orig - f.beta1_hat * xt_orig;
    f.residuals.assign(r.data(), r.data() + r.size());
    f.x_mean = xt_orig.mean();
    out.beta_hat(k) = f.beta1_hat;
    out.per_regressor[static_cast<std::size_t>(k)] = std::move(f);
  }

  out.beta0_hat = y.mean() - X.colwise().mean().dot(out.beta_hat);
  out.residuals = (y - X * out.beta_hat).array() - out.beta0_hat;
  return out;
}

}  // namespace ewpo
