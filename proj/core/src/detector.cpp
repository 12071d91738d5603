#include "sentinel/detector.hpp"

#include <algorithm>
#include <string>
#include <type_traits>
#include <variant>

#include "sentinel/errors.hpp"

namespace sentinel {

Detector::Detector(std::string sensor_id, const SubspaceModel& model, Boundary boundary)
    : sensor_id_(std::move(sensor_id)),
      projector_(std::make_shared<const Projector>(model)),
      boundary_(std::move(boundary)),
      threshold_(threshold_of(boundary_)),
      ring_(2 * model.lag, 0.0),
      projected_(model.dim, 0.0) {
  const auto check = [&](const Eigen::VectorXd& v, const char* what) {
    if (static_cast<std::size_t>(v.size()) != model.dim) {
      throw ParameterError(std::string("detector for '") + sensor_id_ + "': boundary " + what +
                           " has dimension " + std::to_string(v.size()) + ", model has " +
                           std::to_string(model.dim));
    }
  };
  std::visit(
      [&](const auto& b) {
        check(b.centroid, "centroid");
        if constexpr (std::is_same_v<std::decay_t<decltype(b)>, EllipsoidBoundary>) {
          check(b.weights, "weights");
        }
      },
      boundary_);
}

Detector Detector::reset_copy() const {
  Detector copy = *this;
  std::fill(copy.ring_.begin(), copy.ring_.end(), 0.0);
  copy.head_ = 0;
  copy.samples_seen_ = 0;
  copy.last_index_.reset();
  return copy;
}

double Detector::score_projection(const double* x) const {
  if (const auto* sphere = std::get_if<SphereBoundary>(&boundary_)) {
    return sphere_score(sphere->centroid.data(), x, projector_->dim());
  }
  const auto& ellipsoid = std::get<EllipsoidBoundary>(boundary_);
  return ellipsoid_score(ellipsoid.centroid.data(), ellipsoid.weights.data(), x,
                         projector_->dim());
}

std::optional<ScoreEvent> Detector::push(const Measurement& m) {
  if (last_index_ && m.timestamp_index != *last_index_ + 1) {
    throw DataError("sensor '" + sensor_id_ + "': timestamp " + std::to_string(m.timestamp_index) +
                    " does not follow " + std::to_string(*last_index_) +
                    " (stream must be ordered and gap-free)");
  }
  last_index_ = m.timestamp_index;

  const std::size_t lag = projector_->lag();
  // After advancing head_, the window oldest-to-newest is [head_, head_ + L).
  ring_[head_] = m.value;
  ring_[head_ + lag] = m.value;
  head_ = (head_ + 1 == lag) ? 0 : head_ + 1;
  ++samples_seen_;
  if (samples_seen_ < lag) return std::nullopt;

  projector_->apply(ring_.data() + head_, projected_.data());
  const double departure = score_projection(projected_.data());
  return ScoreEvent{sensor_id_, m.timestamp_index, departure, departure > threshold_};
}

std::vector<ScoreEvent> score_series(const Detector& prototype, std::span<const double> values,
                                     std::uint64_t first_index) {
  if (values.size() < prototype.lag()) {
    throw ParameterError("score_series: series length " + std::to_string(values.size()) +
                         " is shorter than lag " + std::to_string(prototype.lag()));
  }
  Detector detector = prototype.reset_copy();
  std::vector<ScoreEvent> events;
  events.reserve(values.size() - prototype.lag() + 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (auto ev = detector.push({first_index + i, values[i]})) events.push_back(std::move(*ev));
  }
  return events;
}

std::vector<PlantAlarm> aggregate(const std::vector<std::vector<ScoreEvent>>& streams) {
  std::vector<PlantAlarm> out;
  if (streams.empty()) return out;
  const std::size_t len = streams.front().size();
  for (const auto& s : streams) {
    if (s.size() != len) {
      throw DataError("aggregate: event streams have different lengths (" +
                      std::to_string(s.size()) + " vs " + std::to_string(len) + ")");
    }
  }
  for (std::size_t t = 0; t < len; ++t) {
    const std::uint64_t ts = streams.front()[t].timestamp_index;
    std::vector<std::string> alarming;
    for (const auto& s : streams) {
      if (s[t].timestamp_index != ts) {
        throw DataError("aggregate: streams are not aligned at position " + std::to_string(t));
      }
      if (s[t].alarmed) alarming.push_back(s[t].sensor_id);
    }
    if (!alarming.empty()) {
      std::sort(alarming.begin(), alarming.end());
      out.push_back({ts, std::move(alarming)});
    }
  }
  return out;
}

std::vector<ScoreEvent> rethreshold(std::vector<ScoreEvent> events, double threshold) {
  for (auto& e : events) e.alarmed = e.departure > threshold;
  return events;
}

}  // namespace sentinel
