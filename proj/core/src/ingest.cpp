#include "sentinel/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "sentinel/errors.hpp"
#include "sentinel/text_util.hpp"

namespace sentinel {

std::vector<bool> SensorSeries::truth_flags() const {
  std::vector<bool> flags(values.size(), false);
  for (const auto& iv : attack_intervals) {
    for (std::size_t i = iv.start; i < iv.end && i < flags.size(); ++i) flags[i] = true;
  }
  return flags;
}

bool SensorSeries::is_attack(std::size_t i) const {
  return std::any_of(attack_intervals.begin(), attack_intervals.end(),
                     [i](const AttackInterval& iv) { return iv.contains(i); });
}

void validate_intervals(const std::vector<AttackInterval>& intervals, std::size_t len) {
  std::vector<AttackInterval> sorted = intervals;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto& iv = sorted[k];
    if (iv.start >= iv.end) {
      throw DataError("attack interval '" + iv.label + "' is empty or inverted");
    }
    if (iv.end > len) {
      throw DataError("attack interval '" + iv.label + "' ends at " + std::to_string(iv.end) +
                      " beyond series length " + std::to_string(len));
    }
    if (k > 0 && sorted[k - 1].end > iv.start) {
      throw DataError("attack intervals '" + sorted[k - 1].label + "' and '" + iv.label +
                      "' overlap");
    }
  }
}

std::vector<AttackInterval> intervals_from_flags(const std::vector<bool>& flags) {
  std::vector<AttackInterval> out;
  std::size_t i = 0;
  while (i < flags.size()) {
    if (!flags[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < flags.size() && flags[j]) ++j;
    out.push_back({i, j, "attack-" + std::to_string(out.size() + 1)});
    i = j;
  }
  return out;
}

const std::vector<AttackInterval>& Dataset::attack_intervals() const {
  static const std::vector<AttackInterval> kEmpty;
  return series.empty() ? kEmpty : series.front().attack_intervals;
}

const SensorSeries& Dataset::sensor(const std::string& id) const {
  for (const auto& s : series) {
    if (s.sensor_id == id) return s;
  }
  throw DataError("dataset '" + name + "' has no sensor '" + id + "'");
}

std::vector<std::string> Dataset::sensor_ids() const {
  std::vector<std::string> ids;
  ids.reserve(series.size());
  for (const auto& s : series) ids.push_back(s.sensor_id);
  return ids;
}

void validate_dataset(const Dataset& dataset) {
  if (dataset.series.empty()) return;
  const auto& first = dataset.series.front();
  validate_intervals(first.attack_intervals, first.size());
  for (const auto& s : dataset.series) {
    if (s.size() != first.size()) {
      throw DataError("sensor '" + s.sensor_id + "' has length " + std::to_string(s.size()) +
                      ", expected " + std::to_string(first.size()));
    }
    if (s.attack_intervals != first.attack_intervals) {
      throw DataError("sensor '" + s.sensor_id + "' has attack windows differing from '" +
                      first.sensor_id + "'");
    }
  }
}

SeriesSplit split(const SensorSeries& series, const SplitSpec& spec) {
  const std::size_t len = series.size();
  if (spec.train_len == 0) throw ParameterError("train_len must be positive");
  const std::size_t fit_len = spec.fit_len();
  if (fit_len > len) {
    throw ParameterError("train_len + validation_len = " + std::to_string(fit_len) +
                         " exceeds series length " + std::to_string(len));
  }
  for (const auto& iv : series.attack_intervals) {
    if (iv.start < fit_len) {
      throw DataError("attack in training window: '" + iv.label + "' starts at " +
                      std::to_string(iv.start) + " < " + std::to_string(fit_len));
    }
  }
  std::span<const double> all(series.values);
  SeriesSplit out;
  out.train = all.subspan(0, spec.train_len);
  out.validation = all.subspan(spec.train_len, spec.validation_len);
  out.test = all.subspan(fit_len);
  out.fit = all.subspan(0, fit_len);
  return out;
}

namespace {

std::size_t column_index(const std::vector<std::string>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? header.size() : static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvSchema& schema, std::string name) {
  std::string line;
  std::size_t line_no = 0;

  // Header (skip leading blank lines).
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!text::trim(line).empty()) {
      for (auto& cell : text::split(line, ',')) header.emplace_back(text::trim(cell));
      break;
    }
  }
  if (header.empty()) throw DataError("no rows: input is empty");

  const std::size_t ts_col =
      schema.timestamp_column.empty() ? 0 : column_index(header, schema.timestamp_column);
  if (ts_col == header.size()) {
    throw DataError("timestamp column '" + schema.timestamp_column + "' not found in header");
  }
  const std::size_t att_col =
      schema.attack_column.empty() ? header.size() : column_index(header, schema.attack_column);

  std::vector<std::size_t> sensor_cols;
  if (schema.sensor_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != ts_col && c != att_col) sensor_cols.push_back(c);
    }
  } else {
    for (const auto& col : schema.sensor_columns) {
      const std::size_t c = column_index(header, col);
      if (c == header.size()) throw DataError("sensor column '" + col + "' not found in header");
      sensor_cols.push_back(c);
    }
  }
  if (sensor_cols.empty()) throw DataError("no sensor columns in header");

  Dataset ds;
  ds.name = std::move(name);
  ds.series.resize(sensor_cols.size());
  for (std::size_t k = 0; k < sensor_cols.size(); ++k) ds.series[k].sensor_id = header[sensor_cols[k]];
  std::vector<bool> flags;

  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, ',');
    if (cells.size() != header.size()) {
      throw DataError("malformed row at line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(cells.size()));
    }
    ds.timestamps.emplace_back(text::trim(cells[ts_col]));
    for (std::size_t k = 0; k < sensor_cols.size(); ++k) {
      const auto v = text::parse_double(cells[sensor_cols[k]]);
      if (!v || !std::isfinite(*v)) {
        throw DataError("non-numeric value '" + std::string(text::trim(cells[sensor_cols[k]])) +
                        "' in column '" + header[sensor_cols[k]] + "' at line " +
                        std::to_string(line_no));
      }
      ds.series[k].values.push_back(*v);
    }
    if (att_col < header.size()) {
      const auto f = text::parse_double(cells[att_col]);
      if (!f || (*f != 0.0 && *f != 1.0)) {
        throw DataError("attack flag '" + std::string(text::trim(cells[att_col])) +
                        "' in column '" + header[att_col] + "' at line " +
                        std::to_string(line_no) + " is not 0 or 1");
      }
      flags.push_back(*f == 1.0);
    }
  }
  if (ds.timestamps.empty()) throw DataError("no rows: header without data");

  const auto intervals = intervals_from_flags(flags);
  for (auto& s : ds.series) s.attack_intervals = intervals;
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file: " + path.string());
  return parse_csv(in, schema, path.stem().string());
}

void write_csv(std::ostream& out, const Dataset& dataset) {
  validate_dataset(dataset);
  out << "timestamp";
  for (const auto& s : dataset.series) out << ',' << s.sensor_id;
  out << ",ATT_FLAG\n";
  const std::size_t len = dataset.length();
  const auto flags = dataset.series.empty() ? std::vector<bool>{} : dataset.series.front().truth_flags();
  for (std::size_t i = 0; i < len; ++i) {
    if (i < dataset.timestamps.size()) {
      out << dataset.timestamps[i];
    } else {
      out << i;
    }
    for (const auto& s : dataset.series) out << ',' << text::format_double(s.values[i]);
    out << ',' << (flags[i] ? 1 : 0) << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file: " + path.string());
  write_csv(out, dataset);
}

Dataset concatenate(const std::vector<Dataset>& parts, std::string name) {
  if (parts.empty()) throw DataError("nothing to concatenate");
  Dataset out;
  out.name = std::move(name);
  const auto ids = parts.front().sensor_ids();
  for (const auto& id : ids) out.series.push_back({id, {}, {}});
  std::vector<bool> flags;
  for (const auto& part : parts) {
    validate_dataset(part);
    if (part.series.size() != ids.size()) {
      throw DataError("dataset '" + part.name + "' has a different sensor set");
    }
    const auto part_flags = part.series.empty() ? std::vector<bool>{} : part.series.front().truth_flags();
    flags.insert(flags.end(), part_flags.begin(), part_flags.end());
    out.timestamps.insert(out.timestamps.end(), part.timestamps.begin(), part.timestamps.end());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      const auto& src = part.sensor(ids[k]);
      out.series[k].values.insert(out.series[k].values.end(), src.values.begin(), src.values.end());
    }
  }
  const auto intervals = intervals_from_flags(flags);
  for (auto& s : out.series) s.attack_intervals = intervals;
  return out;
}

}  // namespace sentinel
