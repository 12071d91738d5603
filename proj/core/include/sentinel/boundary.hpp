#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "sentinel/ssa.hpp"

namespace sentinel {

/// Projections of every lagged vector of the train+validation window:
/// dim x K' with K' = N' - L + 1.
struct SignalCloud {
  Eigen::MatrixXd points;

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(points.rows()); }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(points.cols()); }
};

SignalCloud collect_cloud(const SubspaceModel& model, std::span<const double> values);

/// Mean of the first `columns` cloud points (the training portion).
Eigen::VectorXd projected_mean(const SignalCloud& cloud, std::size_t columns);

/// Spherical boundary: squared distance from the centroid.
struct SphereBoundary {
  Eigen::VectorXd centroid;
  double radius_sq = 0.0;

  [[nodiscard]] double threshold() const { return radius_sq; }
};

/// Axis-aligned ellipsoid: score = sum_i w_i (x_i - c_i)^2, alarm when > 1 + slack.
/// The semi-axis along dimension i is w_i^{-1/2}.
struct EllipsoidBoundary {
  Eigen::VectorXd centroid;
  Eigen::VectorXd weights;
  double slack = 0.0;

  [[nodiscard]] double threshold() const { return 1.0 + slack; }
};

using Boundary = std::variant<SphereBoundary, EllipsoidBoundary>;

enum class BoundaryKind { kSphere, kEllipsoid };

std::string_view to_string(BoundaryKind kind);
BoundaryKind kind_of(const Boundary& boundary);
double threshold_of(const Boundary& boundary);

/// theta_p = max over cloud columns of the squared distance from `centroid`.
SphereBoundary fit_sphere(const SignalCloud& cloud, const Eigen::VectorXd& centroid);

/// Per-dimension (min + max) / 2.
Eigen::VectorXd midrange_centroid(const SignalCloud& cloud);

/// Element-wise (x - c)^2.
Eigen::VectorXd center_square(const Eigen::VectorXd& x, const Eigen::VectorXd& centroid);

/// theta_e = 1 + slack; slack must be non-negative.
double set_threshold(double slack);

// Raw-pointer scoring kernels shared by fitting and the streaming detector.
double sphere_score(const double* centroid, const double* x, std::size_t dim);
double ellipsoid_score(const double* centroid, const double* weights, const double* x,
                       std::size_t dim);

double sphere_score(const SphereBoundary& boundary, const Eigen::VectorXd& x);
double ellipsoid_score(const EllipsoidBoundary& boundary, const Eigen::VectorXd& x);

/// Options and results of the minimum-volume ellipsoid fit.
struct EllipsoidFitOptions {
  /// Scaled KKT stationarity tolerance: max_i |1 - w_i (A^T lambda)_i|.
  double kkt_tolerance = 1e-9;
  /// Duality gap target (absolute, on the sum-of-logs objective).
  double gap_tolerance = 1e-12;
  std::size_t max_iterations = 100000;
  /// Relative axis floor for degenerate (zero-range) dimensions.
  double axis_floor_relative = 1e-6;
  double axis_floor_absolute = 1e-12;
};

struct EllipsoidFit {
  Eigen::VectorXd weights;
  /// One multiplier per cloud column (duplicates share their group's multiplier
  /// split evenly), so that 1/w = sum_j lambda_j a_j at the optimum.
  Eigen::VectorXd multipliers;
  std::size_t iterations = 0;
  double kkt_residual = 0.0;
  double duality_gap = 0.0;
  /// max_j w^T a_j over the cloud; <= 1 after the final rescale.
  double max_constraint = 0.0;
  std::size_t active_constraints = 0;
  std::size_t unique_constraints = 0;
  std::vector<std::size_t> floored_dimensions;
};

/// Maximizes sum_i log w_i subject to w^T center_square(x_j, c) <= 1 for every
/// cloud column x_j and w > 0 (the minimum-volume axis-aligned ellipsoid about c).
/// Throws NumericalError if the solver fails to converge.
EllipsoidFit fit_ellipsoid(const SignalCloud& cloud, const Eigen::VectorXd& centroid,
                           const EllipsoidFitOptions& options = {});

/// Generalized volume proxy prod_i w_i^{-1/2} (product of semi-axes).
double semi_axis_product(const Eigen::VectorXd& weights);

}  // namespace sentinel
