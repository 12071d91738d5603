#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <sentinel/evalharness.hpp>
#include <sentinel/pipeline.hpp>

#include "sentinel_app/config.hpp"

namespace sentinel::app {

/// Output layout under `out` (model/events defaults can be overridden):
///   model/manifest.txt, model/<sensor>.model, model/resolved.conf
///   events/<kind>/<sensor>.csv|.jsonl, events/<kind>/plant_alarms.csv, events/resolved.conf
///   reports/<kind>.txt|.csv|.json, reports/comparison.txt|.csv, reports/resolved.conf
///   synth: <out>/<scenario>.csv, <out>/suite.csv, <out>/resolved.conf

std::vector<SensorModel> cmd_train(const RunConfig& config, std::ostream& log);
void cmd_score(const RunConfig& config, std::ostream& log);
std::vector<EvalReport> cmd_eval(const RunConfig& config, std::ostream& log);
void cmd_synth(const RunConfig& config, std::ostream& log);

/// Runs job(i) for i in [0, count) on up to `workers` threads. The exception of
/// the lowest failing index is rethrown, so failures are deterministic too.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& job);

/// Event stream file I/O (header `sensor_id,timestamp_index,departure,alarmed`
/// for CSV; one JSON object per line for jsonl).
void write_events(std::ostream& out, const std::vector<ScoreEvent>& events, EventFormat format);
std::vector<ScoreEvent> read_events(std::istream& in, EventFormat format);
void write_plant_alarms(std::ostream& out, const std::vector<PlantAlarm>& alarms);

/// Events file name for a sensor under the given format.
std::string events_file_name(const std::string& sensor_id, EventFormat format);

/// Maps toolkit errors onto exit codes: 2 parameter, 3 data, 4 numerical, 1 other.
int exit_code_for(const std::exception& error);

}  // namespace sentinel::app
