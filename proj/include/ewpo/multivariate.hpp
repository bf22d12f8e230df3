#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "ewpo/kernels.hpp"
#include "ewpo/types.hpp"

namespace ewpo {

/// y = b0 + X b + u with X holding the K regressors (no constant column).
class DesignMatrix {
 public:
  /// Throws DataError on shape problems or n <= K + 1, NumericError when
  /// [1 X] is numerically rank deficient.
  DesignMatrix(Eigen::MatrixXd X, Eigen::VectorXd y);

  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y() const { return y_; }
  Eigen::Index rows() const { return X_.rows(); }
  Eigen::Index regressors() const { return X_.cols(); }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
};

enum class Representation { Implicit, Dense };

inline constexpr std::size_t kDenseGuard = 512;

/// Pair-difference operator. Dense holds the explicit matrix (one +1 and one
/// -1 per row, rows in canonical pair order); Implicit holds nothing and is
/// applied by streaming.
struct DifferenceOperator {
  PairScheme scheme{};
  std::size_t n = 0;
  Representation representation = Representation::Implicit;
  Eigen::MatrixXd matrix;

  /// D v. Sorting is not applied here; compose with selection_matrix.
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
};

/// Dense D_a or D_F for n observations. Throws DataError when n < 2 or
/// n > `guard` (use the implicit representation instead).
DifferenceOperator build_difference_matrix(const PairScheme& scheme, std::size_t n,
                                           std::size_t guard = kDenseGuard);

/// Permutation matrix S with S x sorted ascending (stable).
Eigen::MatrixXd selection_matrix(const Eigen::VectorXd& x);

/// I - A (A'A)^-1 A' with A = [1, X without column k]. Throws NumericError
/// ("collinear regressors") when A is numerically rank deficient.
Eigen::MatrixXd residual_maker(const Eigen::MatrixXd& X, Eigen::Index k);

/// M_k v without forming M_k.
Eigen::VectorXd partial_out(const Eigen::MatrixXd& X, Eigen::Index k, const Eigen::VectorXd& v);

struct MultiFitResult {
  Eigen::VectorXd beta_hat;
  double beta0_hat = 0.0;
  Eigen::VectorXd residuals;
  std::vector<FitResult> per_regressor;  // through-origin fits on (M_k x_k, M_k y)
};

/// Per regressor k: partial [1, X_-k] out of x_k and y, run the univariate
/// estimator on the partialled pair (through the origin), then
/// b0 = ybar - sum_k b_k xbar_k. `config.intercept` is ignored.
MultiFitResult fit_multivariate(const DesignMatrix& design, const EstimatorConfig& config,
                                Representation representation = Representation::Implicit,
                                kernels::Backend backend = kernels::Backend::Auto);

/// Pairwise slopes of the partialled regression for regressor k, in
/// canonical pair order over the (optionally sorted) arrangement; NaN marks a
/// degenerate pair. Dense builds M_k, S and D explicitly.
std::vector<double> multivariate_pairwise_parameters(const DesignMatrix& design, Eigen::Index k,
                                                     const PairScheme& scheme,
                                                     Representation representation);

}  // namespace ewpo
