#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sentinel/boundary.hpp"
#include "sentinel/series.hpp"
#include "sentinel/ssa.hpp"

namespace sentinel {

struct ScoreEvent {
  std::string sensor_id;
  std::uint64_t timestamp_index = 0;
  double departure = 0.0;
  bool alarmed = false;

  bool operator==(const ScoreEvent&) const = default;
};

struct PlantAlarm {
  std::uint64_t timestamp_index = 0;
  std::vector<std::string> alarming_sensors;  // sorted, non-empty

  bool operator==(const PlantAlarm&) const = default;
};

/// Online scorer for one sensor. Keeps the last L measurements; once L values
/// have arrived every push projects the window onto the signal subspace and
/// scores it against the boundary. Alarm is strict: departure > threshold.
class Detector {
 public:
  Detector(std::string sensor_id, const SubspaceModel& model, Boundary boundary);

  /// Returns nothing during warm-up (fewer than L samples seen).
  /// Throws DataError unless indices are consecutive.
  std::optional<ScoreEvent> push(const Measurement& m);

  /// Fresh copy without stream state.
  [[nodiscard]] Detector reset_copy() const;

  [[nodiscard]] const std::string& sensor_id() const { return sensor_id_; }
  [[nodiscard]] std::size_t lag() const { return projector_->lag(); }
  [[nodiscard]] std::size_t dim() const { return projector_->dim(); }
  [[nodiscard]] std::uint64_t samples_seen() const { return samples_seen_; }
  [[nodiscard]] double threshold() const { return threshold_; }
  [[nodiscard]] const Boundary& boundary() const { return boundary_; }

  /// Departure score of an already-projected point.
  [[nodiscard]] double score_projection(const double* x) const;

 private:
  std::string sensor_id_;
  std::shared_ptr<const Projector> projector_;
  Boundary boundary_;
  double threshold_ = 0.0;

  // Mirrored ring: each value is written at pos and pos + L, so the current
  // window is always the contiguous range [head, head + L).
  std::vector<double> ring_;
  std::size_t head_ = 0;
  std::vector<double> projected_;
  std::uint64_t samples_seen_ = 0;
  std::optional<std::uint64_t> last_index_;
};

/// Replays a full series through a fresh copy of `prototype`. Events cover
/// indices first_index + L - 1 ... first_index + len - 1.
/// Throws ParameterError if the series is shorter than L.
std::vector<ScoreEvent> score_series(const Detector& prototype, std::span<const double> values,
                                     std::uint64_t first_index = 0);

/// Plant-level merge: one PlantAlarm per timestamp where any sensor alarmed.
/// Streams must be equally long and index-aligned (DataError otherwise).
std::vector<PlantAlarm> aggregate(const std::vector<std::vector<ScoreEvent>>& streams);

/// Re-applies a different threshold to scored events (threshold sweeps).
std::vector<ScoreEvent> rethreshold(std::vector<ScoreEvent> events, double threshold);

}  // namespace sentinel
