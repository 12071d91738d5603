#include "sentinel/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "sentinel/errors.hpp"

namespace sentinel {

namespace {

// Shared by project() and Projector so both produce identical bits.
void project_kernel(const double* rows, std::size_t lag, std::size_t dim, const double* window,
                    double* out) {
  for (std::size_t r = 0; r < dim; ++r) {
    const double* u = rows + r * lag;
    double acc = 0.0;
    for (std::size_t i = 0; i < lag; ++i) acc += u[i] * window[i];
    out[r] = acc;
  }
}

std::vector<double> transpose_rows(const Eigen::MatrixXd& basis) {
  const auto lag = static_cast<std::size_t>(basis.rows());
  const auto dim = static_cast<std::size_t>(basis.cols());
  std::vector<double> rows(lag * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t i = 0; i < lag; ++i) {
      rows[r * lag + i] = basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r));
    }
  }
  return rows;
}

}  // namespace

TrajectoryMatrix embed(std::span<const double> values, std::size_t lag) {
  const std::size_t n = values.size();
  if (lag <= 1 || 2 * lag >= n) {
    throw ParameterError("lag L=" + std::to_string(lag) + " must satisfy 1 < L < N/2 for N=" +
                         std::to_string(n));
  }
  const std::size_t k = n - lag + 1;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < lag; ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i + j];
    }
  }
  return TrajectoryMatrix(std::move(m));
}

Eigen::MatrixXd lagged_covariance(const TrajectoryMatrix& trajectory) {
  const auto& m = trajectory.data();
  const Eigen::Index lag = m.rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(lag, lag);
  s.selfadjointView<Eigen::Lower>().rankUpdate(m);
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return s;
}

std::vector<EigenPair> eigh(const Eigen::MatrixXd& symmetric) {
  if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0) {
    throw ParameterError("eigh: matrix must be square and non-empty");
  }
  const double scale = symmetric.cwiseAbs().maxCoeff();
  const double asym = (symmetric - symmetric.transpose()).cwiseAbs().maxCoeff();
  if (!std::isfinite(scale) || asym > 1e-10 * std::max(scale, 1e-300)) {
    throw ParameterError("eigh: matrix is not symmetric (max |S - S^T| = " +
                         std::to_string(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    // Eigen's tridiagonal QR gives up after 30 sweeps per row.
    throw NumericalError("eigh: symmetric QR did not converge within " +
                         std::to_string(30 * symmetric.rows()) + " iterations");
  }

  const Eigen::Index n = symmetric.rows();
  std::vector<EigenPair> pairs;
  pairs.reserve(static_cast<std::size_t>(n));
  // Eigen returns ascending order.
  for (Eigen::Index c = n - 1; c >= 0; --c) {
    Eigen::VectorXd v = solver.eigenvectors().col(c);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(v(i)) > best) {
        best = std::abs(v(i));
        arg = i;
      }
    }
    if (v(arg) < 0.0) v = -v;
    pairs.push_back({solver.eigenvalues()(c), std::move(v)});
  }
  return pairs;
}

double SubspaceModel::capture_ratio() const {
  const double total = spectrum.sum();
  if (total <= 0.0) return 0.0;
  return spectrum.head(static_cast<Eigen::Index>(dim)).sum() / total;
}

SubspaceModel fit_subspace(std::span<const double> values, std::size_t lag, std::size_t dim) {
  if (dim < 1 || dim > lag) {
    throw ParameterError("signal dimension R=" + std::to_string(dim) +
                         " must satisfy 1 <= R <= L=" + std::to_string(lag));
  }
  const auto trajectory = embed(values, lag);
  const auto pairs = eigh(lagged_covariance(trajectory));

  SubspaceModel model;
  model.lag = lag;
  model.dim = dim;
  model.basis.resize(static_cast<Eigen::Index>(lag), static_cast<Eigen::Index>(dim));
  model.spectrum.resize(static_cast<Eigen::Index>(lag));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    model.spectrum(static_cast<Eigen::Index>(i)) = pairs[i].value;
    if (i < dim) model.basis.col(static_cast<Eigen::Index>(i)) = pairs[i].vector;
  }
  return model;
}

Eigen::VectorXd project(const SubspaceModel& model, std::span<const double> lagged) {
  if (lagged.size() != model.lag) {
    throw ParameterError("project: vector length " + std::to_string(lagged.size()) +
                         " does not match lag " + std::to_string(model.lag));
  }
  const auto rows = transpose_rows(model.basis);
  Eigen::VectorXd out(static_cast<Eigen::Index>(model.dim));
  project_kernel(rows.data(), model.lag, model.dim, lagged.data(), out.data());
  return out;
}

Projector::Projector(const SubspaceModel& model)
    : lag_(model.lag), dim_(model.dim), rows_(transpose_rows(model.basis)) {}

void Projector::apply(const double* window, double* out) const {
  project_kernel(rows_.data(), lag_, dim_, window, out);
}

}  // namespace sentinel
