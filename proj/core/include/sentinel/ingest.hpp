#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sentinel/series.hpp"

namespace sentinel {

/// Column layout of a dataset CSV. The first row is always a header.
struct CsvSchema {
  /// Timestamp column name; empty means "the first column".
  std::string timestamp_column;
  /// Sensor columns to load; empty means every column except timestamp/attack.
  std::vector<std::string> sensor_columns;
  /// Optional 0/1 attack flag column. Missing in the file => all-normal.
  std::string attack_column = "ATT_FLAG";
};

/// Parses CSV text. Intervals are reconstructed as maximal runs of flag == 1.
/// Errors (DataError): "no rows", malformed row (with line number),
/// non-numeric cell (with column name), flag outside {0, 1}.
Dataset parse_csv(std::istream& in, const CsvSchema& schema, std::string name = {});

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema);

/// Writes the dataset in the schema `load_csv` reads: timestamp column,
/// one column per sensor, ATT_FLAG. Values use shortest round-trip formatting,
/// so reloading is bit-exact.
void write_csv(std::ostream& out, const Dataset& dataset);
void write_csv(const std::filesystem::path& path, const Dataset& dataset);

/// Concatenates datasets with identical sensor sets (in the order of `first`)
/// on one timeline, shifting attack intervals of later parts.
Dataset concatenate(const std::vector<Dataset>& parts, std::string name);

}  // namespace sentinel
