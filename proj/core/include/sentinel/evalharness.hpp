#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/detector.hpp"
#include "sentinel/series.hpp"

namespace sentinel {

struct AttackOutcome {
  std::string attack_id;
  std::size_t start = 0;
  std::size_t end = 0;
  bool detected = false;
  std::optional<std::size_t> delay_samples;  // set iff detected
  std::optional<double> delay_hours;
  std::size_t sensor_count = 0;  // distinct sensors alarming inside the window

  bool operator==(const AttackOutcome&) const = default;
};

/// Per-sample binary classification counts and the derived rates.
/// A rate with a zero denominator is reported as 0 and listed in `undefined`.
struct AggregateMetrics {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t true_negatives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double false_alarm_rate = 0.0;
  std::vector<std::string> undefined;

  bool operator==(const AggregateMetrics&) const = default;
};

/// Detection delay and sensor count for every attack window.
/// Throws ParameterError("no attacks to evaluate") when `truth` is empty.
std::vector<AttackOutcome> per_attack(const std::vector<PlantAlarm>& alarms,
                                      const std::vector<AttackInterval>& truth,
                                      double samples_per_hour);

/// Metrics over [eval_start, len) from already-reduced per-sample flags.
AggregateMetrics metrics_from_flags(const std::vector<bool>& alarmed,
                                    const std::vector<bool>& truth, std::size_t eval_start);

/// Plant-level metrics: a sample counts as alarmed if any sensor alarms.
/// `per_sensor_alarms[k][t]` is sensor k's flag at sample t.
AggregateMetrics aggregate_metrics(const std::vector<std::vector<bool>>& per_sensor_alarms,
                                   const std::vector<bool>& truth, std::size_t eval_start);

/// Per-sample flags of one event stream on a timeline of length `len`.
std::vector<bool> alarm_flags(const std::vector<ScoreEvent>& events, std::size_t len);

/// Per-sample plant flags from plant alarms.
std::vector<bool> alarm_flags(const std::vector<PlantAlarm>& alarms, std::size_t len);

struct SensorMetrics {
  std::string sensor_id;
  AggregateMetrics metrics;
};

struct EvalReport {
  std::string name;        // e.g. boundary kind
  std::string dataset;
  std::size_t length = 0;  // timeline length
  std::size_t eval_start = 0;
  double samples_per_hour = 1.0;
  std::vector<AttackOutcome> attacks;
  AggregateMetrics aggregate;
  std::vector<SensorMetrics> sensors;  // diagnostics
};

/// Builds a full report from per-sensor event streams on one timeline.
EvalReport evaluate(std::string name, const std::string& dataset_name,
                    const std::vector<std::vector<ScoreEvent>>& streams,
                    const std::vector<AttackInterval>& truth, std::size_t length,
                    std::size_t eval_start, double samples_per_hour);

struct ComparisonRow {
  std::string attack_id;
  std::optional<std::size_t> delay_a;
  std::optional<std::size_t> delay_b;
  std::size_t count_a = 0;
  std::size_t count_b = 0;
};

struct Comparison {
  std::string name_a;
  std::string name_b;
  std::vector<ComparisonRow> rows;
  AggregateMetrics a;
  AggregateMetrics b;
  double delta_precision = 0.0;  // b - a
  double delta_recall = 0.0;
  double delta_f1 = 0.0;
  double delta_false_alarm_rate = 0.0;
};

/// Side-by-side view. DataError if the reports cover different datasets,
/// timelines or attack sets; ParameterError if either report is empty.
Comparison compare(const EvalReport& a, const EvalReport& b);

std::string render_text(const EvalReport& report);
std::string render_csv(const EvalReport& report);
std::string render_json(const EvalReport& report);
std::string render_text(const Comparison& comparison);
std::string render_csv(const Comparison& comparison);

}  // namespace sentinel
