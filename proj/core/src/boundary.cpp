#include "sentinel/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sentinel/errors.hpp"

namespace sentinel {

SignalCloud collect_cloud(const SubspaceModel& model, std::span<const double> values) {
  if (values.size() < model.lag) {
    throw ParameterError("collect_cloud: window length " + std::to_string(values.size()) +
                         " is shorter than lag " + std::to_string(model.lag));
  }
  const Projector projector(model);
  const std::size_t columns = values.size() - model.lag + 1;
  SignalCloud cloud;
  cloud.points.resize(static_cast<Eigen::Index>(model.dim), static_cast<Eigen::Index>(columns));
  for (std::size_t j = 0; j < columns; ++j) {
    projector.apply(values.data() + j, cloud.points.col(static_cast<Eigen::Index>(j)).data());
  }
  if (!cloud.points.allFinite()) throw DataError("collect_cloud: non-finite projection");
  return cloud;
}

Eigen::VectorXd projected_mean(const SignalCloud& cloud, std::size_t columns) {
  if (columns == 0 || columns > cloud.size()) {
    throw ParameterError("projected_mean: column count " + std::to_string(columns) +
                         " outside [1, " + std::to_string(cloud.size()) + "]");
  }
  return cloud.points.leftCols(static_cast<Eigen::Index>(columns)).rowwise().mean();
}

std::string_view to_string(BoundaryKind kind) {
  return kind == BoundaryKind::kSphere ? "sphere" : "ellipsoid";
}

BoundaryKind kind_of(const Boundary& boundary) {
  return std::holds_alternative<SphereBoundary>(boundary) ? BoundaryKind::kSphere
                                                           : BoundaryKind::kEllipsoid;
}

double threshold_of(const Boundary& boundary) {
  return std::visit([](const auto& b) { return b.threshold(); }, boundary);
}

double sphere_score(const double* centroid, const double* x, std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = centroid[i] - x[i];
    acc += d * d;
  }
  return acc;
}

double ellipsoid_score(const double* centroid, const double* weights, const double* x,
                       std::size_t dim) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = x[i] - centroid[i];
    acc += weights[i] * (d * d);
  }
  return acc;
}

double sphere_score(const SphereBoundary& boundary, const Eigen::VectorXd& x) {
  if (x.size() != boundary.centroid.size()) {
    throw ParameterError("sphere_score: dimension mismatch");
  }
  return sphere_score(boundary.centroid.data(), x.data(), static_cast<std::size_t>(x.size()));
}

double ellipsoid_score(const EllipsoidBoundary& boundary, const Eigen::VectorXd& x) {
  if (x.size() != boundary.centroid.size() || x.size() != boundary.weights.size()) {
    throw ParameterError("ellipsoid_score: dimension mismatch");
  }
  return ellipsoid_score(boundary.centroid.data(), boundary.weights.data(), x.data(),
                         static_cast<std::size_t>(x.size()));
}

SphereBoundary fit_sphere(const SignalCloud& cloud, const Eigen::VectorXd& centroid) {
  if (cloud.size() == 0) throw ParameterError("fit_sphere: empty cloud");
  if (static_cast<std::size_t>(centroid.size()) != cloud.dim()) {
    throw ParameterError("fit_sphere: centroid dimension mismatch");
  }
  double max_score = 0.0;
  for (Eigen::Index j = 0; j < cloud.points.cols(); ++j) {
    max_score = std::max(max_score,
                         sphere_score(centroid.data(), cloud.points.col(j).data(), cloud.dim()));
  }
  return {centroid, max_score};
}

Eigen::VectorXd midrange_centroid(const SignalCloud& cloud) {
  if (cloud.size() == 0) throw ParameterError("midrange_centroid: empty cloud");
  return (cloud.points.rowwise().minCoeff() + cloud.points.rowwise().maxCoeff()) / 2.0;
}

Eigen::VectorXd center_square(const Eigen::VectorXd& x, const Eigen::VectorXd& centroid) {
  if (x.size() != centroid.size()) throw ParameterError("center_square: dimension mismatch");
  return (x - centroid).array().square().matrix();
}

double set_threshold(double slack) {
  if (!(slack >= 0.0) || !std::isfinite(slack)) {
    throw ParameterError("slack epsilon must be a finite non-negative number, got " +
                         std::to_string(slack));
  }
  return 1.0 + slack;
}

double semi_axis_product(const Eigen::VectorXd& weights) {
  // exp of a sum of logs stays finite for extreme weights.
  double log_sum = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) log_sum += -0.5 * std::log(weights(i));
  return std::exp(log_sum);
}

}  // namespace sentinel
