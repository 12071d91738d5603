#include "sentinel/model_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "sentinel/errors.hpp"
#include "sentinel/text_util.hpp"

namespace sentinel {

namespace {

constexpr const char* kModelMagic = "sentinel-model";
constexpr const char* kBundleMagic = "sentinel-bundle";
constexpr int kVersion = 1;

void write_vector(std::ostream& out, const char* key, const Eigen::VectorXd& v) {
  out << key;
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << text::format_double(v(i));
  out << '\n';
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Splits the next non-empty line into key and remainder.
  std::pair<std::string, std::string> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      const auto t = text::trim(line);
      if (t.empty()) continue;
      const auto sp = t.find(' ');
      if (sp == std::string_view::npos) return {std::string(t), {}};
      return {std::string(t.substr(0, sp)), std::string(text::trim(t.substr(sp + 1)))};
    }
    throw DataError("model file truncated after line " + std::to_string(line_no_));
  }

  std::string expect(const std::string& key) {
    auto [k, rest] = next();
    if (k != key) fail("expected '" + key + "', found '" + k + "'");
    return rest;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("model file line " + std::to_string(line_no_) + ": " + what);
  }

  Eigen::VectorXd numbers(const std::string& rest, std::size_t count) const {
    std::vector<double> vals;
    for (const auto& tok : text::split(rest, ' ')) {
      if (text::trim(tok).empty()) continue;
      const auto v = text::parse_double(tok);
      if (!v) fail("not a number: '" + tok + "'");
      vals.push_back(*v);
    }
    if (vals.size() != count) {
      fail("expected " + std::to_string(count) + " values, found " + std::to_string(vals.size()));
    }
    return Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  }

  std::size_t count(const std::string& rest) const {
    const auto v = text::parse_u64(rest);
    if (!v) fail("not a non-negative integer: '" + rest + "'");
    return static_cast<std::size_t>(*v);
  }

  double scalar(const std::string& rest) const { return numbers(rest, 1)(0); }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

}  // namespace

void write_model(std::ostream& out, const SensorModel& m) {
  const auto& sub = m.subspace;
  out << kModelMagic << ' ' << kVersion << '\n';
  out << "sensor_id " << m.sensor_id << '\n';
  out << "lag " << sub.lag << '\n';
  out << "dim " << sub.dim << '\n';
  write_vector(out, "spectrum", sub.spectrum);
  out << "basis\n";
  for (Eigen::Index i = 0; i < sub.basis.rows(); ++i) {
    for (Eigen::Index r = 0; r < sub.basis.cols(); ++r) {
      if (r) out << ' ';
      out << text::format_double(sub.basis(i, r));
    }
    out << '\n';
  }
  if (m.sphere) {
    write_vector(out, "sphere_centroid", m.sphere->centroid);
    out << "sphere_radius_sq " << text::format_double(m.sphere->radius_sq) << '\n';
  }
  if (m.ellipsoid) {
    write_vector(out, "ellipsoid_centroid", m.ellipsoid->centroid);
    write_vector(out, "ellipsoid_weights", m.ellipsoid->weights);
    out << "ellipsoid_slack " << text::format_double(m.ellipsoid->slack) << '\n';
  }
  const auto& s = m.summary;
  out << "summary " << text::format_double(s.capture_ratio) << ' ' << s.cloud_size << ' '
      << s.active_constraints << ' ' << s.solver_iterations << ' '
      << text::format_double(s.kkt_residual) << '\n';
  out << "end\n";
}

SensorModel read_model(std::istream& in) {
  LineReader r(in);
  {
    auto [magic, version] = r.next();
    if (magic != kModelMagic) r.fail("not a sentinel model file");
    if (version != std::to_string(kVersion)) r.fail("unsupported model version '" + version + "'");
  }
  SensorModel m;
  m.sensor_id = r.expect("sensor_id");
  auto& sub = m.subspace;
  sub.lag = r.count(r.expect("lag"));
  sub.dim = r.count(r.expect("dim"));
  if (sub.lag < 1 || sub.dim < 1 || sub.dim > sub.lag) r.fail("invalid lag/dim");
  sub.spectrum = r.numbers(r.expect("spectrum"), sub.lag);
  r.expect("basis");
  sub.basis.resize(static_cast<Eigen::Index>(sub.lag), static_cast<Eigen::Index>(sub.dim));
  for (std::size_t i = 0; i < sub.lag; ++i) {
    auto [first, rest] = r.next();
    sub.basis.row(static_cast<Eigen::Index>(i)) =
        r.numbers(rest.empty() ? first : first + " " + rest, sub.dim).transpose();
  }

  while (true) {
    auto [key, rest] = r.next();
    if (key == "end") break;
    if (key == "sphere_centroid") {
      SphereBoundary b;
      b.centroid = r.numbers(rest, sub.dim);
      b.radius_sq = r.scalar(r.expect("sphere_radius_sq"));
      m.sphere = std::move(b);
    } else if (key == "ellipsoid_centroid") {
      EllipsoidBoundary b;
      b.centroid = r.numbers(rest, sub.dim);
      b.weights = r.numbers(r.expect("ellipsoid_weights"), sub.dim);
      b.slack = r.scalar(r.expect("ellipsoid_slack"));
      m.ellipsoid = std::move(b);
    } else if (key == "summary") {
      const auto v = r.numbers(rest, 5);
      m.summary = {v(0), static_cast<std::size_t>(v(1)), static_cast<std::size_t>(v(2)),
                   static_cast<std::size_t>(v(3)), v(4)};
    } else {
      r.fail("unknown key '" + key + "'");
    }
  }
  if (!m.sphere && !m.ellipsoid) throw DataError("model for '" + m.sensor_id + "' has no boundary");
  return m;
}

std::string model_file_name(const std::string& sensor_id) {
  std::string out;
  for (char c : sensor_id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    out += ok ? c : '_';
  }
  if (out.empty() || out.front() == '.') out = "_" + out;
  return out + ".model";
}

void save_bundle(const std::filesystem::path& dir, const std::vector<SensorModel>& models) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt");
  if (!manifest) throw DataError("cannot write bundle manifest in " + dir.string());
  manifest << kBundleMagic << ' ' << kVersion << '\n';
  std::set<std::string> used;
  for (const auto& m : models) {
    // Distinct ids may sanitize to the same name.
    auto file = model_file_name(m.sensor_id);
    for (int k = 2; !used.insert(file).second; ++k) {
      file = model_file_name(m.sensor_id + "-" + std::to_string(k));
    }
    std::ofstream out(dir / file);
    if (!out) throw DataError("cannot write model file " + (dir / file).string());
    write_model(out, m);
    manifest << "sensor " << file << ' ' << m.sensor_id << '\n';
  }
}

std::vector<SensorModel> load_bundle(const std::filesystem::path& dir) {
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) throw DataError("no model bundle manifest at " + (dir / "manifest.txt").string());
  std::string line;
  if (!std::getline(manifest, line) ||
      text::trim(line) != std::string(kBundleMagic) + " " + std::to_string(kVersion)) {
    throw DataError("invalid bundle manifest header in " + dir.string());
  }
  std::vector<SensorModel> models;
  while (std::getline(manifest, line)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    std::istringstream ls{std::string(t)};
    std::string tag, file;
    ls >> tag >> file;
    std::string id;
    std::getline(ls, id);
    id = std::string(text::trim(id));
    if (tag != "sensor" || file.empty() || id.empty()) {
      throw DataError("malformed manifest line: '" + std::string(t) + "'");
    }
    std::ifstream in(dir / file);
    if (!in) throw DataError("missing model file " + (dir / file).string());
    SensorModel m = read_model(in);
    if (m.sensor_id != id) {
      throw DataError("model file " + file + " holds sensor '" + m.sensor_id + "', manifest says '" +
                      id + "'");
    }
    models.push_back(std::move(m));
  }
  return models;
}

}  // namespace sentinel
