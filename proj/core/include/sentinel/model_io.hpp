#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sentinel/pipeline.hpp"

namespace sentinel {

/// Text record, one key per line, doubles in shortest round-trip form:
///
///   sentinel-model 1
///   sensor_id <id>
///   lag <L>
///   dim <R>
///   spectrum <L values>
///   basis                      (followed by L lines of R values, row-major)
///   sphere_centroid <R values>       (optional, with the next line)
///   sphere_radius_sq <value>
///   ellipsoid_centroid <R values>    (optional, with the next two lines)
///   ellipsoid_weights <R values>
///   ellipsoid_slack <value>
///   summary <capture_ratio> <cloud_size> <active_constraints> <iterations> <kkt_residual>
///   end
void write_model(std::ostream& out, const SensorModel& model);
SensorModel read_model(std::istream& in);

/// A bundle is a directory with `manifest.txt` ("sentinel-bundle 1" then one
/// "sensor <file> <id>" line per sensor) and one model file per sensor.
void save_bundle(const std::filesystem::path& dir, const std::vector<SensorModel>& models);
std::vector<SensorModel> load_bundle(const std::filesystem::path& dir);

/// File-system safe name for a sensor id.
std::string model_file_name(const std::string& sensor_id);

}  // namespace sentinel
