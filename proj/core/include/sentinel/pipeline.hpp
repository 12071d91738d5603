#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentinel/boundary.hpp"
#include "sentinel/detector.hpp"
#include "sentinel/series.hpp"
#include "sentinel/ssa.hpp"

namespace sentinel {

enum class BoundarySelection { kSphere, kEllipsoid, kBoth };

std::string_view to_string(BoundarySelection selection);
/// Accepts "sphere", "ellipsoid", "both"; ParameterError otherwise.
BoundarySelection parse_boundary_selection(std::string_view text);

struct TrainingParams {
  std::size_t lag = 500;
  std::size_t dim = 3;
  SplitSpec split{2400, 1600};
  double slack = 0.1;
  BoundarySelection boundaries = BoundarySelection::kBoth;
  EllipsoidFitOptions ellipsoid_options{};
};

/// Upfront validation against a series length; ParameterError with a message
/// naming the offending key.
void validate(const TrainingParams& params, std::size_t series_length);

struct TrainingSummary {
  double capture_ratio = 0.0;
  std::size_t cloud_size = 0;
  std::size_t active_constraints = 0;
  std::size_t solver_iterations = 0;
  double kkt_residual = 0.0;
};

/// Everything the online scorer needs for one sensor.
struct SensorModel {
  std::string sensor_id;
  SubspaceModel subspace;
  std::optional<SphereBoundary> sphere;
  std::optional<EllipsoidBoundary> ellipsoid;
  TrainingSummary summary;

  [[nodiscard]] Detector detector(BoundaryKind kind) const;
};

/// Fits the subspace on [0, N), collects the cloud on [0, N'), then fits the
/// requested boundaries: sphere about the training-portion mean with radius
/// over the full cloud, ellipsoid about the midrange centroid.
SensorModel train_sensor(const SensorSeries& series, const TrainingParams& params);

}  // namespace sentinel
