#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <sentinel/ingest.hpp>
#include <sentinel/pipeline.hpp>

namespace sentinel::app {

enum class EventFormat { kCsv, kJsonl };

/// Flat `key = value` run configuration. Keys (defaults in parentheses):
///   dataset            input CSV path (required by train/score/eval)
///   timestamp_column   (empty: first column)
///   attack_column      (ATT_FLAG)
///   sensors            comma-separated subset (empty: all)
///   lag (500)  dim (3)  train_len (2400)  validation_len (1600)  epsilon (0.1)
///   boundary           sphere | ellipsoid | both (both)
///   samples_per_hour   (100)
///   out                output directory (out)
///   model              bundle directory (empty: <out>/model)
///   events             event directory (empty: <out>/events)
///   seed               (1)
///   workers            (1; SENTINEL_WORKERS overrides)
///   event_format       csv | jsonl (csv)
struct RunConfig {
  std::string dataset;
  std::string timestamp_column;
  std::string attack_column = "ATT_FLAG";
  std::vector<std::string> sensors;
  std::size_t lag = 500;
  std::size_t dim = 3;
  std::size_t train_len = 2400;
  std::size_t validation_len = 1600;
  double epsilon = 0.1;
  BoundarySelection boundary = BoundarySelection::kBoth;
  double samples_per_hour = 100.0;
  std::string out = "out";
  std::string model;
  std::string events;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  EventFormat event_format = EventFormat::kCsv;

  [[nodiscard]] std::filesystem::path model_dir() const;
  [[nodiscard]] std::filesystem::path events_dir() const;
  [[nodiscard]] std::filesystem::path reports_dir() const;
  [[nodiscard]] TrainingParams training_params() const;
  [[nodiscard]] CsvSchema schema() const;
};

std::string_view to_string(EventFormat format);
EventFormat parse_event_format(std::string_view text);

/// Parses config text. ParameterError names the line for syntax errors,
/// unknown keys, duplicates and malformed values.
RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// Assigns one key from its textual value (used for files and flag overrides).
void set_key(RunConfig& config, const std::string& key, const std::string& value);

/// Range checks that do not need the dataset; every problem is listed.
void validate(const RunConfig& config);

/// Every key in a fixed order; parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const RunConfig& config);
std::string to_text(const RunConfig& config);

/// Applies SENTINEL_WORKERS if set (ParameterError if not a positive integer).
void apply_environment(RunConfig& config);

}  // namespace sentinel::app
