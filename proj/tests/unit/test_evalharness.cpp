#include <algorithm>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include <sentinel/errors.hpp>
#include <sentinel/evalharness.hpp>

namespace sentinel {
namespace {

std::vector<ScoreEvent> stream(const std::string& id, std::size_t from, std::size_t to,
                               const std::vector<std::size_t>& alarmed_at) {
  std::vector<ScoreEvent> out;
  for (std::size_t t = from; t < to; ++t) {
    const bool a = std::find(alarmed_at.begin(), alarmed_at.end(), t) != alarmed_at.end();
    out.push_back({id, t, a ? 2.0 : 0.5, a});
  }
  return out;
}

TEST(PerAttack, AlarmAtStartHasZeroDelay) {
  const auto o = per_attack({{50, {"a"}}}, {{50, 60, "x"}}, 100.0);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_TRUE(o[0].detected);
  EXPECT_EQ(o[0].delay_samples, 0u);
  EXPECT_EQ(o[0].delay_hours, 0.0);
  EXPECT_EQ(o[0].sensor_count, 1u);
}

TEST(PerAttack, FirstAlarmInsideWindowCounts) {
  const auto o = per_attack({{40, {"a"}}, {55, {"b"}}, {57, {"a", "c"}}, {60, {"d"}}},
                            {{50, 60, "x"}}, 10.0);
  EXPECT_EQ(o[0].delay_samples, 5u);
  EXPECT_DOUBLE_EQ(*o[0].delay_hours, 0.5);
  EXPECT_EQ(o[0].sensor_count, 3u);
}

TEST(PerAttack, UndetectedWindow) {
  const auto o = per_attack({{10, {"a"}}}, {{50, 60, "x"}, {70, 80, "y"}}, 100.0);
  for (const auto& a : o) {
    EXPECT_FALSE(a.detected);
    EXPECT_FALSE(a.delay_samples);
    EXPECT_FALSE(a.delay_hours);
    EXPECT_EQ(a.sensor_count, 0u);
  }
}

TEST(PerAttack, EmptyTruthIsAnError) {
  try {
    per_attack({}, {}, 100.0);
    FAIL();
  } catch (const ParameterError& e) {
    EXPECT_STREQ(e.what(), "no attacks to evaluate");
  }
}

TEST(Metrics, PerfectDetector) {
  std::vector<bool> truth(100, false);
  for (std::size_t t = 60; t < 80; ++t) truth[t] = true;
  const auto m = metrics_from_flags(truth, truth, 10);
  EXPECT_EQ(m.true_positives, 20u);
  EXPECT_EQ(m.true_negatives, 70u);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.false_alarm_rate, 0.0);
  EXPECT_TRUE(m.undefined.empty());
}

TEST(Metrics, SilentDetectorHasUndefinedPrecision) {
  std::vector<bool> truth(100, false);
  for (std::size_t t = 60; t < 80; ++t) truth[t] = true;
  const auto m = metrics_from_flags(std::vector<bool>(100, false), truth, 0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_EQ(m.undefined, (std::vector<std::string>{"precision"}));
}

TEST(Metrics, AllAttackWindowLeavesFalseAlarmRateUndefined) {
  const auto m = metrics_from_flags(std::vector<bool>(10, true), std::vector<bool>(10, true), 0);
  EXPECT_EQ(m.undefined, (std::vector<std::string>{"false_alarm_rate"}));
}

TEST(Metrics, KnownCounts) {
  std::vector<bool> truth{false, false, true, true, true, false};
  std::vector<bool> alarm{true, false, true, false, true, false};
  const auto m = metrics_from_flags(alarm, truth, 0);
  EXPECT_EQ(m.true_positives, 2u);
  EXPECT_EQ(m.false_positives, 1u);
  EXPECT_EQ(m.false_negatives, 1u);
  EXPECT_EQ(m.true_negatives, 2u);
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.false_alarm_rate, 1.0 / 3.0);
  EXPECT_THROW(metrics_from_flags(alarm, std::vector<bool>(5), 0), DataError);
}

TEST(Metrics, F1IsHarmonicMean) {
  std::mt19937_64 rng(1);
  std::bernoulli_distribution coin(0.3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<bool> a(200), t(200);
    for (std::size_t i = 0; i < 200; ++i) {
      a[i] = coin(rng);
      t[i] = coin(rng);
    }
    const auto m = metrics_from_flags(a, t, 0);
    if (m.precision + m.recall > 0) {
      EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-15);
      EXPECT_LE(m.f1, std::max(m.precision, m.recall));
      EXPECT_GE(m.f1, std::min(m.precision, m.recall));
    }
  }
}

TEST(Metrics, PlantLevelIsSensorOrderInvariant) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution coin(0.1);
  std::vector<std::vector<bool>> sensors(5, std::vector<bool>(300));
  for (auto& s : sensors) {
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = coin(rng);
  }
  std::vector<bool> truth(300, false);
  for (std::size_t t = 200; t < 260; ++t) truth[t] = true;
  const auto ref = aggregate_metrics(sensors, truth, 50);
  for (int k = 0; k < 10; ++k) {
    std::shuffle(sensors.begin(), sensors.end(), rng);
    EXPECT_EQ(aggregate_metrics(sensors, truth, 50), ref);
  }
}

TEST(AlarmFlags, FromEventsAndPlantAlarms) {
  const auto f = alarm_flags(stream("a", 3, 10, {4, 9}), 10);
  EXPECT_EQ(f, (std::vector<bool>{false, false, false, false, true, false, false, false, false, true}));
  const auto g = alarm_flags(std::vector<PlantAlarm>{{2, {"a"}}, {12, {"b"}}}, 4);
  EXPECT_EQ(g, (std::vector<bool>{false, false, true, false}));
}

EvalReport sample_report(const std::string& name, std::vector<std::size_t> a_alarms,
                         std::vector<std::size_t> b_alarms) {
  std::vector<std::vector<ScoreEvent>> streams{stream("a", 9, 200, a_alarms), stream("b", 9, 200, b_alarms)};
  return evaluate(name, "ds", streams, {{120, 160, "w1"}, {170, 190, "w2"}}, 200, 100, 100.0);
}

TEST(Evaluate, BuildsReport) {
  const auto r = sample_report("sphere", {110, 130, 131}, {135, 175});
  ASSERT_EQ(r.attacks.size(), 2u);
  EXPECT_EQ(r.attacks[0].delay_samples, 10u);
  EXPECT_EQ(r.attacks[0].sensor_count, 2u);
  EXPECT_EQ(r.attacks[1].delay_samples, 5u);
  EXPECT_EQ(r.aggregate.true_positives, 4u);
  EXPECT_EQ(r.aggregate.false_positives, 1u);
  ASSERT_EQ(r.sensors.size(), 2u);
  EXPECT_EQ(r.sensors[1].sensor_id, "b");
  EXPECT_EQ(r.sensors[1].metrics.false_positives, 0u);
}

TEST(Evaluate, AllNormalTruthReportsFalseAlarmsOnly) {
  std::vector<std::vector<ScoreEvent>> streams{stream("a", 0, 100, {50})};
  const auto r = evaluate("x", "ds", streams, {}, 100, 10, 100.0);
  EXPECT_TRUE(r.attacks.empty());
  EXPECT_DOUBLE_EQ(r.aggregate.false_alarm_rate, 1.0 / 90.0);
  EXPECT_NE(render_text(r).find("false-alarm rate only"), std::string::npos);
}

TEST(Compare, IdenticalReportsHaveZeroDeltas) {
  const auto r = sample_report("x", {130}, {});
  const auto c = compare(r, r);
  EXPECT_EQ(c.delta_precision, 0.0);
  EXPECT_EQ(c.delta_recall, 0.0);
  EXPECT_EQ(c.delta_f1, 0.0);
  EXPECT_EQ(c.delta_false_alarm_rate, 0.0);
  for (const auto& row : c.rows) {
    EXPECT_EQ(row.delay_a, row.delay_b);
    EXPECT_EQ(row.count_a, row.count_b);
  }
}

TEST(Compare, DeltasAreBMinusA) {
  const auto a = sample_report("sphere", {}, {});
  const auto b = sample_report("ellipsoid", {125, 126}, {171});
  const auto c = compare(a, b);
  EXPECT_EQ(c.rows[0].delay_a, std::nullopt);
  EXPECT_EQ(c.rows[0].delay_b, 5u);
  EXPECT_DOUBLE_EQ(c.delta_recall, b.aggregate.recall);
  EXPECT_NE(render_text(c).find("delta"), std::string::npos);
  EXPECT_NE(render_csv(c).find("delay_sphere,delay_ellipsoid"), std::string::npos);
}

TEST(Compare, Errors) {
  const auto a = sample_report("a", {}, {});
  auto b = a;
  b.dataset = "other";
  EXPECT_THROW(compare(a, b), DataError);
  b = a;
  b.attacks.pop_back();
  EXPECT_THROW(compare(a, b), DataError);
  b = a;
  b.attacks[0].start = 121;
  EXPECT_THROW(compare(a, b), DataError);
  EXPECT_THROW(compare(EvalReport{}, a), ParameterError);
}

TEST(Render, JsonParsesAndCarriesFields) {
  const auto r = sample_report("ellipsoid", {125}, {});
  const auto j = nlohmann::json::parse(render_json(r));
  EXPECT_EQ(j["name"], "ellipsoid");
  EXPECT_EQ(j["attacks"].size(), 2u);
  EXPECT_EQ(j["attacks"][0]["delay_samples"], 5);
  EXPECT_TRUE(j["attacks"][1]["delay_samples"].is_null());
  EXPECT_DOUBLE_EQ(j["aggregate"]["recall"].get<double>(), r.aggregate.recall);
  EXPECT_EQ(j["sensors"].size(), 2u);
}

TEST(Render, CsvAndText) {
  const auto r = sample_report("sphere", {125}, {});
  const auto csv = render_csv(r);
  EXPECT_EQ(csv.rfind("attack_id,start,end,detected,delay_samples,delay_hours,sensor_count\n", 0), 0u);
  EXPECT_NE(csv.find("w1,120,160,1,5,0.05,1\n"), std::string::npos);
  EXPECT_NE(csv.find("w2,170,190,0,,,0\n"), std::string::npos);
  const auto text = render_text(r);
  EXPECT_NE(text.find("w2"), std::string::npos);
}

TEST(Rethreshold, RaisingThresholdNeverAddsAlarms) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> d(1.0);
  std::vector<ScoreEvent> events;
  for (std::uint64_t t = 0; t < 500; ++t) events.push_back({"s", t, d(rng), false});
  std::size_t prev = events.size() + 1;
  for (double th : {0.0, 0.5, 1.0, 1.1, 2.0, 5.0}) {
    const auto flags = alarm_flags(rethreshold(events, th), 500);
    const auto n = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
    EXPECT_LE(n, prev);
    prev = n;
  }
}

}  // namespace
}  // namespace sentinel
