#include "sentinel_app/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <sentinel/errors.hpp>
#include <sentinel/text_util.hpp>

namespace sentinel::app {

namespace {

std::size_t parse_count(const std::string& key, const std::string& value) {
  const auto v = text::parse_u64(value);
  if (!v) throw ParameterError(key + ": expected a non-negative integer, got '" + value + "'");
  return static_cast<std::size_t>(*v);
}

double parse_real(const std::string& key, const std::string& value) {
  const auto v = text::parse_double(value);
  if (!v || !std::isfinite(*v)) throw ParameterError(key + ": expected a number, got '" + value + "'");
  return *v;
}

}  // namespace

std::filesystem::path RunConfig::model_dir() const {
  return model.empty() ? std::filesystem::path(out) / "model" : std::filesystem::path(model);
}

std::filesystem::path RunConfig::events_dir() const {
  return events.empty() ? std::filesystem::path(out) / "events" : std::filesystem::path(events);
}

std::filesystem::path RunConfig::reports_dir() const { return std::filesystem::path(out) / "reports"; }

TrainingParams RunConfig::training_params() const {
  TrainingParams p;
  p.lag = lag;
  p.dim = dim;
  p.split = SplitSpec{train_len, validation_len};
  p.slack = epsilon;
  p.boundaries = boundary;
  return p;
}

CsvSchema RunConfig::schema() const {
  CsvSchema s;
  s.timestamp_column = timestamp_column;
  s.attack_column = attack_column;
  return s;
}

std::string_view to_string(EventFormat format) {
  return format == EventFormat::kCsv ? "csv" : "jsonl";
}

EventFormat parse_event_format(std::string_view text) {
  if (text == "csv") return EventFormat::kCsv;
  if (text == "jsonl") return EventFormat::kJsonl;
  throw ParameterError("event_format: expected csv or jsonl, got '" + std::string(text) + "'");
}

void set_key(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "dataset") {
    c.dataset = value;
  } else if (key == "timestamp_column") {
    c.timestamp_column = value;
  } else if (key == "attack_column") {
    c.attack_column = value;
  } else if (key == "sensors") {
    c.sensors.clear();
    for (const auto& part : text::split(value, ',')) {
      const auto id = std::string(text::trim(part));
      if (!id.empty()) c.sensors.push_back(id);
    }
  } else if (key == "lag") {
    c.lag = parse_count(key, value);
  } else if (key == "dim") {
    c.dim = parse_count(key, value);
  } else if (key == "train_len") {
    c.train_len = parse_count(key, value);
  } else if (key == "validation_len") {
    c.validation_len = parse_count(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_real(key, value);
  } else if (key == "boundary") {
    c.boundary = parse_boundary_selection(value);
  } else if (key == "samples_per_hour") {
    c.samples_per_hour = parse_real(key, value);
  } else if (key == "out") {
    c.out = value;
  } else if (key == "model") {
    c.model = value;
  } else if (key == "events") {
    c.events = value;
  } else if (key == "seed") {
    const auto v = text::parse_u64(value);
    if (!v) throw ParameterError("seed: expected an unsigned 64-bit integer, got '" + value + "'");
    c.seed = *v;
  } else if (key == "workers") {
    c.workers = parse_count(key, value);
  } else if (key == "event_format") {
    c.event_format = parse_event_format(value);
  } else {
    throw ParameterError("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) throw ParameterError(where + "expected 'key = value'");
    const std::string key(text::trim(t.substr(0, eq)));
    const std::string value(text::trim(t.substr(eq + 1)));
    if (key.empty()) throw ParameterError(where + "missing key");
    if (!seen.insert(key).second) throw ParameterError(where + "duplicate key '" + key + "'");
    try {
      set_key(c, key, value);
    } catch (const ParameterError& e) {
      throw ParameterError(where + e.what());
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file: " + path.string());
  return parse_config(in);
}

void validate(const RunConfig& c) {
  std::vector<std::string> problems;
  if (c.lag < 2) problems.push_back("lag must be at least 2 (got " + std::to_string(c.lag) + ")");
  if (c.dim < 1) problems.push_back("dim must be at least 1");
  if (c.dim >= c.lag) {
    problems.push_back("dim must be smaller than lag (dim " + std::to_string(c.dim) + ", lag " +
                       std::to_string(c.lag) + ")");
  }
  if (c.train_len <= 2 * c.lag) {
    problems.push_back("train_len must exceed 2 * lag (train_len " + std::to_string(c.train_len) +
                       ", lag " + std::to_string(c.lag) + ")");
  }
  if (!(c.epsilon >= 0.0)) problems.push_back("epsilon must be non-negative");
  if (!(c.samples_per_hour > 0.0)) problems.push_back("samples_per_hour must be positive");
  if (c.workers < 1) problems.push_back("workers must be at least 1");
  if (c.out.empty()) problems.push_back("out must not be empty");
  if (problems.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  - " + p;
  throw ParameterError(msg);
}

void write_config(std::ostream& out, const RunConfig& c) {
  out << "dataset = " << c.dataset << '\n';
  out << "timestamp_column = " << c.timestamp_column << '\n';
  out << "attack_column = " << c.attack_column << '\n';
  out << "sensors = " << text::join(c.sensors, ",") << '\n';
  out << "lag = " << c.lag << '\n';
  out << "dim = " << c.dim << '\n';
  out << "train_len = " << c.train_len << '\n';
  out << "validation_len = " << c.validation_len << '\n';
  out << "epsilon = " << text::format_double(c.epsilon) << '\n';
  out << "boundary = " << to_string(c.boundary) << '\n';
  out << "samples_per_hour = " << text::format_double(c.samples_per_hour) << '\n';
  out << "out = " << c.out << '\n';
  out << "model = " << c.model << '\n';
  out << "events = " << c.events << '\n';
  out << "seed = " << c.seed << '\n';
  out << "workers = " << c.workers << '\n';
  out << "event_format = " << to_string(c.event_format) << '\n';
}

std::string to_text(const RunConfig& config) {
  std::ostringstream os;
  write_config(os, config);
  return os.str();
}

void apply_environment(RunConfig& config) {
  const char* env = std::getenv("SENTINEL_WORKERS");
  if (env == nullptr || *env == '\0') return;
  const auto v = text::parse_u64(env);
  if (!v || *v == 0) {
    throw ParameterError("SENTINEL_WORKERS must be a positive integer, got '" + std::string(env) + "'");
  }
  config.workers = static_cast<std::size_t>(*v);
}

}  // namespace sentinel::app
