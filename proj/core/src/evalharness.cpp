#include "sentinel/evalharness.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sentinel/errors.hpp"
#include "sentinel/text_util.hpp"

namespace sentinel {

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pct(double v) { return fixed(100.0 * v, 2); }

std::string opt_delay(const std::optional<std::size_t>& d) {
  return d ? std::to_string(*d) : std::string("x");
}

double ratio(std::size_t num, std::size_t den, const char* name, std::vector<std::string>& undefined) {
  if (den == 0) {
    undefined.emplace_back(name);
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::ordered_json metrics_json(const AggregateMetrics& m) {
  nlohmann::ordered_json j;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["false_alarm_rate"] = m.false_alarm_rate;
  j["true_positives"] = m.true_positives;
  j["false_positives"] = m.false_positives;
  j["true_negatives"] = m.true_negatives;
  j["false_negatives"] = m.false_negatives;
  j["undefined"] = m.undefined;
  return j;
}

}  // namespace

std::vector<AttackOutcome> per_attack(const std::vector<PlantAlarm>& alarms,
                                      const std::vector<AttackInterval>& truth,
                                      double samples_per_hour) {
  if (truth.empty()) throw ParameterError("no attacks to evaluate");
  if (!(samples_per_hour > 0.0)) throw ParameterError("samples_per_hour must be positive");
  std::vector<AttackOutcome> out;
  out.reserve(truth.size());
  for (const auto& iv : truth) {
    AttackOutcome o;
    o.attack_id = iv.label;
    o.start = iv.start;
    o.end = iv.end;
    std::set<std::string> sensors;
    for (const auto& a : alarms) {
      if (!iv.contains(static_cast<std::size_t>(a.timestamp_index))) continue;
      const auto delay = static_cast<std::size_t>(a.timestamp_index) - iv.start;
      if (!o.delay_samples || delay < *o.delay_samples) o.delay_samples = delay;
      sensors.insert(a.alarming_sensors.begin(), a.alarming_sensors.end());
    }
    o.detected = o.delay_samples.has_value();
    if (o.detected) o.delay_hours = static_cast<double>(*o.delay_samples) / samples_per_hour;
    o.sensor_count = sensors.size();
    out.push_back(std::move(o));
  }
  return out;
}

AggregateMetrics metrics_from_flags(const std::vector<bool>& alarmed,
                                    const std::vector<bool>& truth, std::size_t eval_start) {
  if (alarmed.size() != truth.size()) {
    throw DataError("metrics: alarm flags (" + std::to_string(alarmed.size()) +
                    ") and truth flags (" + std::to_string(truth.size()) + ") differ in length");
  }
  AggregateMetrics m;
  for (std::size_t t = eval_start; t < truth.size(); ++t) {
    if (alarmed[t]) {
      truth[t] ? ++m.true_positives : ++m.false_positives;
    } else {
      truth[t] ? ++m.false_negatives : ++m.true_negatives;
    }
  }
  m.precision = ratio(m.true_positives, m.true_positives + m.false_positives, "precision", m.undefined);
  m.recall = ratio(m.true_positives, m.true_positives + m.false_negatives, "recall", m.undefined);
  m.false_alarm_rate =
      ratio(m.false_positives, m.false_positives + m.true_negatives, "false_alarm_rate", m.undefined);
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

AggregateMetrics aggregate_metrics(const std::vector<std::vector<bool>>& per_sensor_alarms,
                                   const std::vector<bool>& truth, std::size_t eval_start) {
  std::vector<bool> any(truth.size(), false);
  for (const auto& flags : per_sensor_alarms) {
    if (flags.size() != truth.size()) {
      throw DataError("aggregate_metrics: sensor flags and truth differ in length");
    }
    for (std::size_t t = 0; t < flags.size(); ++t) {
      if (flags[t]) any[t] = true;
    }
  }
  return metrics_from_flags(any, truth, eval_start);
}

std::vector<bool> alarm_flags(const std::vector<ScoreEvent>& events, std::size_t len) {
  std::vector<bool> flags(len, false);
  for (const auto& e : events) {
    if (e.alarmed && e.timestamp_index < len) flags[static_cast<std::size_t>(e.timestamp_index)] = true;
  }
  return flags;
}

std::vector<bool> alarm_flags(const std::vector<PlantAlarm>& alarms, std::size_t len) {
  std::vector<bool> flags(len, false);
  for (const auto& a : alarms) {
    if (a.timestamp_index < len) flags[static_cast<std::size_t>(a.timestamp_index)] = true;
  }
  return flags;
}

EvalReport evaluate(std::string name, const std::string& dataset_name,
                    const std::vector<std::vector<ScoreEvent>>& streams,
                    const std::vector<AttackInterval>& truth, std::size_t length,
                    std::size_t eval_start, double samples_per_hour) {
  EvalReport r;
  r.name = std::move(name);
  r.dataset = dataset_name;
  r.length = length;
  r.eval_start = eval_start;
  r.samples_per_hour = samples_per_hour;

  std::vector<bool> truth_flags(length, false);
  for (const auto& iv : truth) {
    for (std::size_t t = iv.start; t < iv.end && t < length; ++t) truth_flags[t] = true;
  }

  const auto plant = aggregate(streams);
  if (!truth.empty()) r.attacks = per_attack(plant, truth, samples_per_hour);

  std::vector<std::vector<bool>> per_sensor;
  per_sensor.reserve(streams.size());
  for (const auto& s : streams) {
    per_sensor.push_back(alarm_flags(s, length));
    r.sensors.push_back({s.empty() ? std::string() : s.front().sensor_id,
                         metrics_from_flags(per_sensor.back(), truth_flags, eval_start)});
  }
  r.aggregate = aggregate_metrics(per_sensor, truth_flags, eval_start);
  return r;
}

Comparison compare(const EvalReport& a, const EvalReport& b) {
  if (a.length == 0 || b.length == 0) throw ParameterError("compare: empty report");
  if (a.dataset != b.dataset || a.length != b.length || a.eval_start != b.eval_start ||
      a.attacks.size() != b.attacks.size()) {
    throw DataError("compare: reports '" + a.name + "' and '" + b.name +
                    "' do not cover the same dataset and truth");
  }
  Comparison c;
  c.name_a = a.name;
  c.name_b = b.name;
  for (std::size_t i = 0; i < a.attacks.size(); ++i) {
    const auto& x = a.attacks[i];
    const auto& y = b.attacks[i];
    if (x.start != y.start || x.end != y.end) {
      throw DataError("compare: attack windows differ at row " + std::to_string(i));
    }
    c.rows.push_back({x.attack_id, x.delay_samples, y.delay_samples, x.sensor_count, y.sensor_count});
  }
  c.a = a.aggregate;
  c.b = b.aggregate;
  c.delta_precision = b.aggregate.precision - a.aggregate.precision;
  c.delta_recall = b.aggregate.recall - a.aggregate.recall;
  c.delta_f1 = b.aggregate.f1 - a.aggregate.f1;
  c.delta_false_alarm_rate = b.aggregate.false_alarm_rate - a.aggregate.false_alarm_rate;
  return c;
}

std::string render_text(const EvalReport& r) {
  std::ostringstream os;
  os << "report: " << r.name << "  dataset: " << r.dataset << "  samples: " << r.length
     << "  eval_start: " << r.eval_start << "\n";
  if (r.attacks.empty()) {
    os << "no attack windows in truth; false-alarm rate only\n";
  } else {
    os << "attack          start     end  detected  delay(samples)  delay(hours)  sensors\n";
    for (const auto& a : r.attacks) {
      char line[256];
      std::snprintf(line, sizeof line, "%-12s %8zu %7zu  %8s  %14s  %12s  %7zu\n",
                    a.attack_id.c_str(), a.start, a.end, a.detected ? "yes" : "no",
                    opt_delay(a.delay_samples).c_str(),
                    a.delay_hours ? fixed(*a.delay_hours).c_str() : "x", a.sensor_count);
      os << line;
    }
  }
  const auto& m = r.aggregate;
  os << "precision " << pct(m.precision) << "%  recall " << pct(m.recall) << "%  f1 " << pct(m.f1)
     << "%  false_alarm_rate " << pct(m.false_alarm_rate) << "%\n";
  if (!m.undefined.empty()) os << "undefined (zero denominator): " << text::join(m.undefined, ", ") << "\n";
  return os.str();
}

std::string render_csv(const EvalReport& r) {
  std::ostringstream os;
  os << "attack_id,start,end,detected,delay_samples,delay_hours,sensor_count\n";
  for (const auto& a : r.attacks) {
    os << a.attack_id << ',' << a.start << ',' << a.end << ',' << (a.detected ? 1 : 0) << ','
       << (a.delay_samples ? std::to_string(*a.delay_samples) : "") << ','
       << (a.delay_hours ? text::format_double(*a.delay_hours) : "") << ',' << a.sensor_count
       << '\n';
  }
  const auto& m = r.aggregate;
  os << "\nmetric,value\n"
     << "precision," << text::format_double(m.precision) << '\n'
     << "recall," << text::format_double(m.recall) << '\n'
     << "f1," << text::format_double(m.f1) << '\n'
     << "false_alarm_rate," << text::format_double(m.false_alarm_rate) << '\n';
  return os.str();
}

std::string render_json(const EvalReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["dataset"] = r.dataset;
  j["length"] = r.length;
  j["eval_start"] = r.eval_start;
  j["samples_per_hour"] = r.samples_per_hour;
  auto attacks = nlohmann::ordered_json::array();
  for (const auto& a : r.attacks) {
    nlohmann::ordered_json ja;
    ja["attack_id"] = a.attack_id;
    ja["start"] = a.start;
    ja["end"] = a.end;
    ja["detected"] = a.detected;
    ja["delay_samples"] = a.delay_samples ? nlohmann::ordered_json(*a.delay_samples) : nullptr;
    ja["delay_hours"] = a.delay_hours ? nlohmann::ordered_json(*a.delay_hours) : nullptr;
    ja["sensor_count"] = a.sensor_count;
    attacks.push_back(std::move(ja));
  }
  j["attacks"] = std::move(attacks);
  j["aggregate"] = metrics_json(r.aggregate);
  auto sensors = nlohmann::ordered_json::array();
  for (const auto& s : r.sensors) {
    nlohmann::ordered_json js = metrics_json(s.metrics);
    js["sensor_id"] = s.sensor_id;
    sensors.push_back(std::move(js));
  }
  j["sensors"] = std::move(sensors);
  return j.dump(2) + "\n";
}

std::string render_text(const Comparison& c) {
  std::ostringstream os;
  os << "comparison: " << c.name_a << " vs " << c.name_b << "\n";
  if (!c.rows.empty()) {
    char head[256];
    std::snprintf(head, sizeof head, "%-12s %10s %10s %8s %8s %8s\n", "attack",
                  ("delay:" + c.name_a.substr(0, 4)).c_str(), ("delay:" + c.name_b.substr(0, 4)).c_str(),
                  ("n:" + c.name_a.substr(0, 4)).c_str(), ("n:" + c.name_b.substr(0, 4)).c_str(),
                  "dn");
    os << head;
    for (const auto& row : c.rows) {
      char line[256];
      std::snprintf(line, sizeof line, "%-12s %10s %10s %8zu %8zu %+8lld\n", row.attack_id.c_str(),
                    opt_delay(row.delay_a).c_str(), opt_delay(row.delay_b).c_str(), row.count_a,
                    row.count_b,
                    static_cast<long long>(row.count_b) - static_cast<long long>(row.count_a));
      os << line;
    }
  }
  char line[512];
  std::snprintf(line, sizeof line,
                "%-10s precision %7s%%  recall %7s%%  f1 %7s%%  false_alarm_rate %7s%%\n",
                c.name_a.c_str(), pct(c.a.precision).c_str(), pct(c.a.recall).c_str(),
                pct(c.a.f1).c_str(), pct(c.a.false_alarm_rate).c_str());
  os << line;
  std::snprintf(line, sizeof line,
                "%-10s precision %7s%%  recall %7s%%  f1 %7s%%  false_alarm_rate %7s%%\n",
                c.name_b.c_str(), pct(c.b.precision).c_str(), pct(c.b.recall).c_str(),
                pct(c.b.f1).c_str(), pct(c.b.false_alarm_rate).c_str());
  os << line;
  std::snprintf(line, sizeof line,
                "%-10s precision %+7.2f%%  recall %+7.2f%%  f1 %+7.2f%%  false_alarm_rate %+7.2f%%\n",
                "delta", 100.0 * c.delta_precision, 100.0 * c.delta_recall, 100.0 * c.delta_f1,
                100.0 * c.delta_false_alarm_rate);
  os << line;
  return os.str();
}

std::string render_csv(const Comparison& c) {
  std::ostringstream os;
  os << "attack_id,delay_" << c.name_a << ",delay_" << c.name_b << ",count_" << c.name_a
     << ",count_" << c.name_b << '\n';
  for (const auto& row : c.rows) {
    os << row.attack_id << ',' << (row.delay_a ? std::to_string(*row.delay_a) : "") << ','
       << (row.delay_b ? std::to_string(*row.delay_b) : "") << ',' << row.count_a << ','
       << row.count_b << '\n';
  }
  os << "\nmetric," << c.name_a << ',' << c.name_b << ",delta\n";
  auto row = [&](const char* name, double x, double y, double d) {
    os << name << ',' << text::format_double(x) << ',' << text::format_double(y) << ','
       << text::format_double(d) << '\n';
  };
  row("precision", c.a.precision, c.b.precision, c.delta_precision);
  row("recall", c.a.recall, c.b.recall, c.delta_recall);
  row("f1", c.a.f1, c.b.f1, c.delta_f1);
  row("false_alarm_rate", c.a.false_alarm_rate, c.b.false_alarm_rate, c.delta_false_alarm_rate);
  return os.str();
}

}  // namespace sentinel
