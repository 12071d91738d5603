#include "sentinel/pipeline.hpp"

#include <string>

#include "sentinel/errors.hpp"

namespace sentinel {

std::string_view to_string(BoundarySelection selection) {
  switch (selection) {
    case BoundarySelection::kSphere:
      return "sphere";
    case BoundarySelection::kEllipsoid:
      return "ellipsoid";
    case BoundarySelection::kBoth:
      return "both";
  }
  return "both";
}

BoundarySelection parse_boundary_selection(std::string_view text) {
  if (text == "sphere") return BoundarySelection::kSphere;
  if (text == "ellipsoid") return BoundarySelection::kEllipsoid;
  if (text == "both") return BoundarySelection::kBoth;
  throw ParameterError("boundary must be one of sphere|ellipsoid|both, got '" + std::string(text) +
                       "'");
}

void validate(const TrainingParams& params, std::size_t series_length) {
  const auto& sp = params.split;
  if (params.lag <= 1) throw ParameterError("lag: must be greater than 1");
  if (params.dim < 1 || params.dim > params.lag) {
    throw ParameterError("dim: R=" + std::to_string(params.dim) + " must satisfy 1 <= R <= lag=" +
                         std::to_string(params.lag));
  }
  if (sp.train_len <= 2 * params.lag) {
    throw ParameterError("train_len: N=" + std::to_string(sp.train_len) +
                         " must exceed 2 * lag = " + std::to_string(2 * params.lag));
  }
  if (sp.fit_len() > series_length) {
    throw ParameterError("train_len + validation_len = " + std::to_string(sp.fit_len()) +
                         " exceeds series length " + std::to_string(series_length));
  }
  set_threshold(params.slack);
}

Detector SensorModel::detector(BoundaryKind kind) const {
  if (kind == BoundaryKind::kSphere) {
    if (!sphere) throw ParameterError("model for '" + sensor_id + "' has no sphere boundary");
    return Detector(sensor_id, subspace, *sphere);
  }
  if (!ellipsoid) throw ParameterError("model for '" + sensor_id + "' has no ellipsoid boundary");
  return Detector(sensor_id, subspace, *ellipsoid);
}

SensorModel train_sensor(const SensorSeries& series, const TrainingParams& params) {
  validate(params, series.size());
  const SeriesSplit parts = split(series, params.split);

  SensorModel model;
  model.sensor_id = series.sensor_id;
  model.subspace = fit_subspace(parts.train, params.lag, params.dim);
  const SignalCloud cloud = collect_cloud(model.subspace, parts.fit);
  model.summary.capture_ratio = model.subspace.capture_ratio();
  model.summary.cloud_size = cloud.size();

  if (params.boundaries != BoundarySelection::kEllipsoid) {
    const std::size_t train_columns = params.split.train_len - params.lag + 1;
    model.sphere = fit_sphere(cloud, projected_mean(cloud, train_columns));
  }
  if (params.boundaries != BoundarySelection::kSphere) {
    const Eigen::VectorXd centroid = midrange_centroid(cloud);
    const EllipsoidFit fit = fit_ellipsoid(cloud, centroid, params.ellipsoid_options);
    model.ellipsoid = EllipsoidBoundary{centroid, fit.weights, params.slack};
    model.summary.active_constraints = fit.active_constraints;
    model.summary.solver_iterations = fit.iterations;
    model.summary.kkt_residual = fit.kkt_residual;
  }
  return model;
}

}  // namespace sentinel
