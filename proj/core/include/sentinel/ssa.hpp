#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace sentinel {

/// L x K Hankel matrix; column j is the lagged vector [m_j, ..., m_{j+L-1}].
class TrajectoryMatrix {
 public:
  TrajectoryMatrix() = default;
  explicit TrajectoryMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {}

  [[nodiscard]] std::size_t lag() const { return static_cast<std::size_t>(data_.rows()); }
  [[nodiscard]] std::size_t columns() const { return static_cast<std::size_t>(data_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& data() const { return data_; }

 private:
  Eigen::MatrixXd data_;
};

/// Hankel embedding. Requires 1 < L < N/2 (ParameterError otherwise).
TrajectoryMatrix embed(std::span<const double> values, std::size_t lag);

/// The unnormalized lagged covariance M * M^T, exactly symmetric.
Eigen::MatrixXd lagged_covariance(const TrajectoryMatrix& trajectory);

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

/// Full eigendecomposition of a symmetric matrix, sorted by non-increasing
/// eigenvalue. Each eigenvector is sign-normalized so its largest-magnitude
/// component is positive (first such index on ties).
/// Throws ParameterError for non-symmetric input, NumericalError if the
/// solver does not converge.
std::vector<EigenPair> eigh(const Eigen::MatrixXd& symmetric);

/// Signal subspace learned from attack-free data.
struct SubspaceModel {
  std::size_t lag = 0;
  std::size_t dim = 0;
  Eigen::MatrixXd basis;     // lag x dim, orthonormal columns
  Eigen::VectorXd spectrum;  // all lag eigenvalues, non-increasing

  /// Fraction of the spectrum captured by the leading `dim` eigenvalues.
  [[nodiscard]] double capture_ratio() const;
};

SubspaceModel fit_subspace(std::span<const double> values, std::size_t lag, std::size_t dim);

/// U^T v. Throws ParameterError if v.size() != lag.
Eigen::VectorXd project(const SubspaceModel& model, std::span<const double> lagged);

/// Row-major copy of U^T (dim rows of length lag) used by the streaming
/// kernels, so batch and online projections share one summation order.
class Projector {
 public:
  Projector() = default;
  explicit Projector(const SubspaceModel& model);

  [[nodiscard]] std::size_t lag() const { return lag_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }

  /// out[r] = sum_i U[i][r] * window[i]; window must hold `lag` values,
  /// out must hold `dim`.
  void apply(const double* window, double* out) const;

 private:
  std::size_t lag_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> rows_;
};

}  // namespace sentinel
