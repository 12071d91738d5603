#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sentinel {

/// One sample of a sensor stream. The index is the sample ordinal.
struct Measurement {
  std::uint64_t timestamp_index = 0;
  double value = 0.0;
};

/// Half-open labeled attack window [start, end).
struct AttackInterval {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string label;

  [[nodiscard]] bool contains(std::size_t i) const { return i >= start && i < end; }
  [[nodiscard]] std::size_t length() const { return end - start; }
  bool operator==(const AttackInterval&) const = default;
};

/// A univariate measurement sequence. Timestamp indices are implicit: the
/// i-th value has index i, so the series is gap-free by construction.
struct SensorSeries {
  std::string sensor_id;
  std::vector<double> values;
  std::vector<AttackInterval> attack_intervals;

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] std::vector<bool> truth_flags() const;
  [[nodiscard]] bool is_attack(std::size_t i) const;
};

/// Checks the interval invariants: pairwise disjoint, each inside [0, len),
/// non-empty. Throws DataError.
void validate_intervals(const std::vector<AttackInterval>& intervals, std::size_t len);

/// Maximal runs of `true` as half-open intervals, labeled "attack-1", ...
std::vector<AttackInterval> intervals_from_flags(const std::vector<bool>& flags);

/// Series sharing a common timeline and plant-wide attack windows.
struct Dataset {
  std::string name;
  std::vector<std::string> timestamps;  // raw timestamp cells, reports only
  std::vector<SensorSeries> series;

  [[nodiscard]] std::size_t length() const { return series.empty() ? 0 : series.front().size(); }
  [[nodiscard]] const std::vector<AttackInterval>& attack_intervals() const;
  [[nodiscard]] const SensorSeries& sensor(const std::string& id) const;
  [[nodiscard]] std::vector<std::string> sensor_ids() const;
};

/// Throws DataError unless every member has equal length and identical intervals.
void validate_dataset(const Dataset& dataset);

/// Training length N and validation length; N' = N + validation.
struct SplitSpec {
  std::size_t train_len = 0;
  std::size_t validation_len = 0;

  [[nodiscard]] std::size_t fit_len() const { return train_len + validation_len; }
};

/// Non-owning views over one series: train [0,N), validation [N,N'), test [N',len).
struct SeriesSplit {
  std::span<const double> train;
  std::span<const double> validation;
  std::span<const double> test;
  /// train + validation, contiguous.
  std::span<const double> fit;
};

SeriesSplit split(const SensorSeries& series, const SplitSpec& spec);

}  // namespace sentinel
