#include "sentinel_app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include <sentinel/detector.hpp>
#include <sentinel/errors.hpp>
#include <sentinel/ingest.hpp>
#include <sentinel/model_io.hpp>
#include <sentinel/synthgen.hpp>
#include <sentinel/text_util.hpp>

namespace sentinel::app {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEventsHeader = "sensor_id,timestamp_index,departure,alarmed";

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_resolved(const fs::path& dir, const RunConfig& config) {
  fs::create_directories(dir);
  auto out = open_out(dir / "resolved.conf");
  write_config(out, config);
}

void write_text(const fs::path& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

std::vector<BoundaryKind> kinds_of(BoundarySelection selection) {
  switch (selection) {
    case BoundarySelection::kSphere:
      return {BoundaryKind::kSphere};
    case BoundarySelection::kEllipsoid:
      return {BoundaryKind::kEllipsoid};
    case BoundarySelection::kBoth:
      break;
  }
  return {BoundaryKind::kSphere, BoundaryKind::kEllipsoid};
}

Dataset load_dataset(const RunConfig& config) {
  if (config.dataset.empty()) throw ParameterError("dataset: no dataset path configured");
  return load_csv(config.dataset, config.schema());
}

// Sensor ids to process, in dataset column order.
std::vector<std::string> selected_sensors(const Dataset& ds, const RunConfig& config) {
  const auto all = ds.sensor_ids();
  if (config.sensors.empty()) return all;
  std::vector<std::string> unknown;
  for (const auto& id : config.sensors) {
    if (std::find(all.begin(), all.end(), id) == all.end()) unknown.push_back(id);
  }
  if (!unknown.empty()) {
    throw DataError("sensors not in dataset: " + text::join(unknown, ","));
  }
  std::vector<std::string> out;
  for (const auto& id : all) {
    if (std::find(config.sensors.begin(), config.sensors.end(), id) != config.sensors.end()) {
      out.push_back(id);
    }
  }
  return out;
}

std::string join_sorted(std::set<std::string> ids) {
  return text::join(std::vector<std::string>(ids.begin(), ids.end()), ",");
}

}  // namespace

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& job) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        job(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), count);
  if (threads <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(run);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string events_file_name(const std::string& sensor_id, EventFormat format) {
  auto name = model_file_name(sensor_id);
  name.resize(name.size() - std::string(".model").size());
  return name + (format == EventFormat::kCsv ? ".csv" : ".jsonl");
}

void write_events(std::ostream& out, const std::vector<ScoreEvent>& events, EventFormat format) {
  if (format == EventFormat::kCsv) {
    out << kEventsHeader << '\n';
    for (const auto& e : events) {
      out << e.sensor_id << ',' << e.timestamp_index << ',' << text::format_double(e.departure) << ','
          << (e.alarmed ? 1 : 0) << '\n';
    }
    return;
  }
  for (const auto& e : events) {
    out << "{\"sensor_id\":" << nlohmann::json(e.sensor_id).dump()
        << ",\"timestamp_index\":" << e.timestamp_index
        << ",\"departure\":" << text::format_double(e.departure)
        << ",\"alarmed\":" << (e.alarmed ? "true" : "false") << "}\n";
  }
}

std::vector<ScoreEvent> read_events(std::istream& in, EventFormat format) {
  std::vector<ScoreEvent> events;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> DataError {
    return DataError("events line " + std::to_string(line_no) + ": " + what);
  };
  if (format == EventFormat::kCsv) {
    if (!std::getline(in, line)) return events;
    ++line_no;
    if (text::trim(line) != kEventsHeader) throw fail("unexpected header '" + line + "'");
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      const auto cells = text::split(text::trim(line), ',');
      if (cells.size() != 4) throw fail("expected 4 fields");
      const auto idx = text::parse_u64(cells[1]);
      const auto dep = text::parse_double(cells[2]);
      if (!idx || !dep || (cells[3] != "0" && cells[3] != "1")) throw fail("malformed event");
      events.push_back({cells[0], *idx, *dep, cells[3] == "1"});
    }
    return events;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      events.push_back({j.at("sensor_id").get<std::string>(), j.at("timestamp_index").get<std::uint64_t>(),
                        j.at("departure").get<double>(), j.at("alarmed").get<bool>()});
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    }
  }
  return events;
}

void write_plant_alarms(std::ostream& out, const std::vector<PlantAlarm>& alarms) {
  out << "timestamp_index,sensor_count,alarming_sensors\n";
  for (const auto& a : alarms) {
    out << a.timestamp_index << ',' << a.alarming_sensors.size() << ','
        << text::join(a.alarming_sensors, ";") << '\n';
  }
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ParameterError*>(&error)) return 2;
  if (dynamic_cast<const DataError*>(&error)) return 3;
  if (dynamic_cast<const NumericalError*>(&error)) return 4;
  if (dynamic_cast<const fs::filesystem_error*>(&error)) return 3;
  return 1;
}

std::vector<SensorModel> cmd_train(const RunConfig& config, std::ostream& log) {
  validate(config);
  const Dataset ds = load_dataset(config);
  const auto ids = selected_sensors(ds, config);
  const TrainingParams params = config.training_params();
  validate(params, ds.length());

  std::vector<SensorModel> models(ids.size());
  parallel_for(ids.size(), config.workers, [&](std::size_t i) {
    try {
      models[i] = train_sensor(ds.sensor(ids[i]), params);
    } catch (const ParameterError& e) {
      throw ParameterError("sensor '" + ids[i] + "': " + e.what());
    } catch (const DataError& e) {
      throw DataError("sensor '" + ids[i] + "': " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("sensor '" + ids[i] + "': " + e.what());
    }
  });

  const fs::path dir = config.model_dir();
  save_bundle(dir, models);
  write_resolved(dir, config);

  log << "trained " << models.size() << " sensor(s) -> " << dir.string() << '\n';
  log << "sensor,capture_ratio,cloud_size,active_constraints,solver_iterations,kkt_residual\n";
  for (const auto& m : models) {
    const auto& s = m.summary;
    log << m.sensor_id << ',' << text::format_double(s.capture_ratio) << ',' << s.cloud_size << ','
        << s.active_constraints << ',' << s.solver_iterations << ','
        << text::format_double(s.kkt_residual) << '\n';
  }
  return models;
}

void cmd_score(const RunConfig& config, std::ostream& log) {
  validate(config);
  const Dataset ds = load_dataset(config);
  const auto ids = selected_sensors(ds, config);
  const auto bundle = load_bundle(config.model_dir());

  std::set<std::string> in_bundle;
  for (const auto& m : bundle) in_bundle.insert(m.sensor_id);
  std::set<std::string> wanted(ids.begin(), ids.end());
  std::set<std::string> missing;  // requested but not trained
  for (const auto& id : wanted) {
    if (!in_bundle.count(id)) missing.insert(id);
  }
  std::set<std::string> extra;  // trained but absent from the dataset
  if (config.sensors.empty()) {
    for (const auto& id : in_bundle) {
      if (!wanted.count(id)) extra.insert(id);
    }
  }
  if (!missing.empty() || !extra.empty()) {
    std::string msg = "sensor mismatch between dataset and model bundle";
    if (!missing.empty()) msg += "; missing from bundle: " + join_sorted(missing);
    if (!extra.empty()) msg += "; not in dataset: " + join_sorted(extra);
    throw DataError(msg);
  }

  std::vector<const SensorModel*> models;
  for (const auto& id : ids) {
    models.push_back(&*std::find_if(bundle.begin(), bundle.end(),
                                    [&](const SensorModel& m) { return m.sensor_id == id; }));
  }

  const fs::path root = config.events_dir();
  for (const BoundaryKind kind : kinds_of(config.boundary)) {
    const fs::path dir = root / std::string(to_string(kind));
    fs::create_directories(dir);
    std::vector<std::vector<ScoreEvent>> streams(ids.size());
    parallel_for(ids.size(), config.workers, [&](std::size_t i) {
      const SensorModel& m = *models[i];
      if ((kind == BoundaryKind::kSphere && !m.sphere) ||
          (kind == BoundaryKind::kEllipsoid && !m.ellipsoid)) {
        throw DataError("model for '" + m.sensor_id + "' has no " + std::string(to_string(kind)) +
                        " boundary");
      }
      Detector detector = m.detector(kind);
      const auto& values = ds.sensor(ids[i]).values;
      auto& events = streams[i];
      events.reserve(values.size());
      for (std::size_t t = 0; t < values.size(); ++t) {
        if (auto e = detector.push({t, values[t]})) events.push_back(std::move(*e));
      }
      auto out = open_out(dir / events_file_name(ids[i], config.event_format));
      write_events(out, events, config.event_format);
    });
    const auto alarms = aggregate(streams);
    auto out = open_out(dir / "plant_alarms.csv");
    write_plant_alarms(out, alarms);

    std::size_t alarmed = 0;
    for (const auto& s : streams) {
      alarmed += static_cast<std::size_t>(
          std::count_if(s.begin(), s.end(), [](const ScoreEvent& e) { return e.alarmed; }));
    }
    log << to_string(kind) << ": " << ids.size() << " sensor(s), " << alarmed
        << " alarmed event(s), " << alarms.size() << " plant alarm sample(s) -> " << dir.string()
        << '\n';
  }
  write_resolved(root, config);
}

std::vector<EvalReport> cmd_eval(const RunConfig& config, std::ostream& log) {
  validate(config);
  const Dataset ds = load_dataset(config);
  const auto ids = selected_sensors(ds, config);
  const std::size_t eval_start = config.train_len + config.validation_len;
  if (eval_start > ds.length()) {
    throw ParameterError("train_len + validation_len (" + std::to_string(eval_start) +
                         ") exceeds the dataset length (" + std::to_string(ds.length()) + ")");
  }

  const fs::path out_dir = config.reports_dir();
  fs::create_directories(out_dir);
  std::vector<EvalReport> reports;
  for (const BoundaryKind kind : kinds_of(config.boundary)) {
    const fs::path dir = config.events_dir() / std::string(to_string(kind));
    std::vector<std::vector<ScoreEvent>> streams(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const fs::path file = dir / events_file_name(ids[i], config.event_format);
      std::ifstream in(file, std::ios::binary);
      if (!in) throw DataError("missing event file " + file.string());
      streams[i] = read_events(in, config.event_format);
      for (const auto& e : streams[i]) {
        if (e.sensor_id != ids[i]) {
          throw DataError(file.string() + ": event for sensor '" + e.sensor_id + "'");
        }
        if (e.timestamp_index >= ds.length()) {
          throw DataError(file.string() + ": timestamp " + std::to_string(e.timestamp_index) +
                          " beyond the dataset length " + std::to_string(ds.length()));
        }
      }
    }
    EvalReport report = evaluate(std::string(to_string(kind)), ds.name, streams,
                                 ds.attack_intervals(), ds.length(), eval_start,
                                 config.samples_per_hour);
    const std::string stem = std::string(to_string(kind));
    write_text(out_dir / (stem + ".txt"), render_text(report));
    write_text(out_dir / (stem + ".csv"), render_csv(report));
    write_text(out_dir / (stem + ".json"), render_json(report));
    log << render_text(report) << '\n';
    reports.push_back(std::move(report));
  }
  if (reports.size() == 2) {
    const Comparison c = compare(reports[0], reports[1]);
    write_text(out_dir / "comparison.txt", render_text(c));
    write_text(out_dir / "comparison.csv", render_csv(c));
    log << render_text(c) << '\n';
  }
  write_resolved(out_dir, config);
  return reports;
}

void cmd_synth(const RunConfig& config, std::ostream& log) {
  if (config.out.empty()) throw ParameterError("out must not be empty");
  const fs::path dir = config.out;
  fs::create_directories(dir);
  const Dataset suite = scenario_suite(config.seed);
  for (const auto& series : suite.series) {
    Dataset one;
    one.name = series.sensor_id;
    one.timestamps = suite.timestamps;
    one.series = {series};
    write_csv(dir / (series.sensor_id + ".csv"), one);
  }
  write_csv(dir / "suite.csv", suite);
  write_resolved(dir, config);
  log << "wrote " << suite.series.size() << " scenario file(s) and suite.csv -> " << dir.string()
      << '\n';
}

}  // namespace sentinel::app
