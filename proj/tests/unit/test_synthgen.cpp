#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include <sentinel/errors.hpp>
#include <sentinel/ingest.hpp>
#include <sentinel/synthgen.hpp>

namespace sentinel {
namespace {

SignalSpec clean_sine() {
  SignalSpec s;
  s.sensor_id = "x";
  s.length = 1000;
  s.components = {Sinusoid{1.0, 100.0, 0.0}};
  s.noise_sigma = 0.0;
  return s;
}

SignalSpec noisy(std::uint64_t seed = 9) {
  SignalSpec s;
  s.sensor_id = "n";
  s.length = 2000;
  s.offset = 5.0;
  s.components = {Sinusoid{1.0, 100.0, 0.3}};
  s.noise_sigma = 0.1;
  s.seed = seed;
  return s;
}

AttackSpec attack(AttackKind kind, AttackShape shape, double magnitude, std::size_t start = 1000,
                  std::size_t end = 1500) {
  AttackSpec a;
  a.kind = kind;
  a.shape = shape;
  a.start = start;
  a.end = end;
  a.magnitude = magnitude;
  return a;
}

TEST(Generate, NoiselessSinePeaksAtAmplitude) {
  const auto s = generate(clean_sine());
  ASSERT_EQ(s.size(), 1000u);
  EXPECT_EQ(s.values[0], 0.0);
  EXPECT_NEAR(s.values[25], 1.0, 1e-15);
  EXPECT_NEAR(*std::max_element(s.values.begin(), s.values.end()), 1.0, 1e-15);
  EXPECT_NEAR(*std::min_element(s.values.begin(), s.values.end()), -1.0, 1e-15);
  EXPECT_TRUE(s.attack_intervals.empty());
}

TEST(Generate, DeterministicPerSeed) {
  EXPECT_EQ(generate(noisy(3)).values, generate(noisy(3)).values);
  EXPECT_NE(generate(noisy(3)).values, generate(noisy(4)).values);
}

TEST(Generate, NoiseHasRequestedSpread) {
  auto spec = noisy();
  spec.length = 20000;
  const auto s = generate(spec);
  spec.noise_sigma = 0.0;
  const auto base = generate(spec);
  double ss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) ss += (s.values[i] - base.values[i]) * (s.values[i] - base.values[i]);
  EXPECT_NEAR(std::sqrt(ss / static_cast<double>(s.size())), 0.1, 0.003);
}

TEST(Generate, RejectsBadSpecs) {
  auto s = clean_sine();
  s.components.clear();
  EXPECT_THROW(generate(s), ParameterError);
  s = clean_sine();
  s.noise_sigma = -1.0;
  EXPECT_THROW(generate(s), ParameterError);
  s = clean_sine();
  s.components[0].period = 0.0;
  EXPECT_THROW(generate(s), ParameterError);
}

TEST(Inject, OutsideWindowIsBitIdentical) {
  const auto base = generate(noisy());
  for (auto shape : {AttackShape::kStepBias, AttackShape::kRamp, AttackShape::kFreezeToValue}) {
    const auto s = inject(base, attack(AttackKind::kSA, shape, 2.0), 0.1);
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (i >= 1000 && i < 1500) continue;
      ASSERT_EQ(s.values[i], base.values[i]) << to_string(shape) << " at " << i;
    }
    ASSERT_EQ(s.attack_intervals.size(), 1u);
    EXPECT_EQ(s.attack_intervals[0], (AttackInterval{1000, 1500, "SA"}));
  }
}

TEST(Inject, ZeroStepOnlyLabels) {
  const auto base = generate(noisy());
  auto a = attack(AttackKind::kMSA, AttackShape::kStepBias, 0.0);
  a.label = "zero";
  const auto s = inject(base, a, 0.1);
  EXPECT_EQ(s.values, base.values);
  EXPECT_EQ(s.attack_intervals[0].label, "zero");
}

TEST(Inject, StepAddsBias) {
  const auto base = generate(noisy());
  const auto s = inject(base, attack(AttackKind::kDDA, AttackShape::kStepBias, 5.0), 0.1);
  for (std::size_t i = 1000; i < 1500; ++i) EXPECT_NEAR(s.values[i] - base.values[i], 0.5, 1e-12);
}

TEST(Inject, MicroStealthyStaysBelowNoise) {
  const auto base = generate(noisy());
  for (auto shape : {AttackShape::kStepBias, AttackShape::kRamp}) {
    const auto s = inject(base, attack(AttackKind::kMSA, shape, 0.9), 0.1);
    for (std::size_t i = 0; i < base.size(); ++i) EXPECT_LT(std::abs(s.values[i] - base.values[i]), 0.1);
  }
}

TEST(Inject, RampReachesFullBias) {
  const auto base = generate(noisy());
  const auto s = inject(base, attack(AttackKind::kSA, AttackShape::kRamp, 3.0), 0.1);
  EXPECT_NEAR(s.values[1499] - base.values[1499], 0.3, 1e-12);
  EXPECT_NEAR(s.values[1000] - base.values[1000], 0.3 / 500.0, 1e-12);
  for (std::size_t i = 1001; i < 1500; ++i) {
    EXPECT_GT(s.values[i] - base.values[i], s.values[i - 1] - base.values[i - 1] - 1e-12);
  }
}

TEST(Inject, FreezeWithZeroMagnitudeIsFlat) {
  const auto base = generate(noisy());
  const auto s = inject(base, attack(AttackKind::kMSA, AttackShape::kFreezeToValue, 0.0), 0.1);
  double ref = 0.0;
  for (std::size_t i = 800; i < 1000; ++i) ref += base.values[i];
  ref /= 200.0;
  for (std::size_t i = 1000; i < 1500; ++i) {
    EXPECT_EQ(s.values[i], s.values[1000]);
  }
  EXPECT_NEAR(s.values[1000], ref, 1e-12);
}

TEST(Inject, FreezeToExplicitValue) {
  auto a = attack(AttackKind::kDDA, AttackShape::kFreezeToValue, 0.0);
  a.freeze_value = -3.0;
  const auto s = inject(generate(noisy()), a, 0.1);
  for (std::size_t i = 1000; i < 1500; ++i) EXPECT_EQ(s.values[i], -3.0);
}

TEST(Inject, DampShrinksOscillation) {
  auto spec = noisy();
  spec.noise_sigma = 0.0;
  const auto base = generate(spec);
  auto a = attack(AttackKind::kSA, AttackShape::kOscillationDamp, 0.0);
  a.damping = 0.75;
  const auto s = inject(base, a, 0.1);
  auto range = [](const std::vector<double>& v, std::size_t from, std::size_t to) {
    const auto [lo, hi] = std::minmax_element(v.begin() + static_cast<std::ptrdiff_t>(from),
                                              v.begin() + static_cast<std::ptrdiff_t>(to));
    return *hi - *lo;
  };
  EXPECT_NEAR(range(s.values, 1000, 1500), 0.25 * range(base.values, 1000, 1500), 1e-9);
  a.damping = 0.0;
  const auto same = inject(base, a, 0.1);
  for (std::size_t i = 0; i < base.size(); ++i) EXPECT_NEAR(same.values[i], base.values[i], 1e-12);
}

TEST(Inject, OverlapAndRangeErrors) {
  const auto once = inject(generate(noisy()), attack(AttackKind::kSA, AttackShape::kStepBias, 2.0), 0.1);
  EXPECT_THROW(inject(once, attack(AttackKind::kSA, AttackShape::kStepBias, 2.0, 1400, 1600), 0.1),
               DataError);
  EXPECT_THROW(inject(once, attack(AttackKind::kSA, AttackShape::kStepBias, 2.0, 1900, 2100), 0.1),
               DataError);
  const auto twice =
      inject(once, attack(AttackKind::kSA, AttackShape::kStepBias, 2.0, 100, 200), 0.1);
  ASSERT_EQ(twice.attack_intervals.size(), 2u);
  EXPECT_EQ(twice.attack_intervals[0].start, 100u);
}

TEST(Validate, MagnitudeBands) {
  EXPECT_NO_THROW(validate(attack(AttackKind::kMSA, AttackShape::kStepBias, 0.99)));
  EXPECT_THROW(validate(attack(AttackKind::kMSA, AttackShape::kStepBias, 1.0)), ParameterError);
  EXPECT_NO_THROW(validate(attack(AttackKind::kSA, AttackShape::kStepBias, 1.0)));
  EXPECT_NO_THROW(validate(attack(AttackKind::kSA, AttackShape::kStepBias, -3.0)));
  EXPECT_THROW(validate(attack(AttackKind::kSA, AttackShape::kStepBias, 3.01)), ParameterError);
  EXPECT_THROW(validate(attack(AttackKind::kDDA, AttackShape::kStepBias, 3.0)), ParameterError);
  EXPECT_NO_THROW(validate(attack(AttackKind::kDDA, AttackShape::kRamp, 3.5)));
  auto damp = attack(AttackKind::kSA, AttackShape::kOscillationDamp, 0.0);
  damp.damping = 1.5;
  EXPECT_THROW(validate(damp), ParameterError);
  EXPECT_THROW(validate(attack(AttackKind::kSA, AttackShape::kStepBias, 2.0, 5, 5)), ParameterError);
}

TEST(Suite, Layout) {
  const auto ds = scenario_suite(7);
  ASSERT_EQ(ds.series.size(), 7u);
  EXPECT_EQ(ds.sensor_ids(),
            (std::vector<std::string>{"MSA1", "MSA2", "SA1", "SA2", "SA3", "DDA1", "DDA2"}));
  EXPECT_EQ(ds.length(), 4800u);
  ASSERT_EQ(ds.attack_intervals().size(), 1u);
  EXPECT_EQ(ds.attack_intervals()[0].start, 4000u);
  EXPECT_EQ(ds.attack_intervals()[0].end, 4800u);
  const auto catalog = scenario_catalog(7);
  for (std::size_t k = 0; k < catalog.size(); ++k) {
    const auto clean = generate(catalog[k].signal);
    for (std::size_t i = 0; i < 4000; ++i) ASSERT_EQ(ds.series[k].values[i], clean.values[i]);
    EXPECT_NO_THROW(validate(catalog[k].attack));
  }
}

TEST(Suite, DeterministicAndSeeded) {
  const auto a = scenario_suite(11);
  const auto b = scenario_suite(11);
  const auto c = scenario_suite(12);
  for (std::size_t k = 0; k < a.series.size(); ++k) {
    EXPECT_EQ(a.series[k].values, b.series[k].values);
    EXPECT_NE(a.series[k].values, c.series[k].values);
  }
}

TEST(Suite, CsvRoundTrip) {
  const auto ds = scenario_suite(2);
  std::ostringstream out;
  write_csv(out, ds);
  std::istringstream in(out.str());
  const auto back = parse_csv(in, {}, "suite");
  ASSERT_EQ(back.series.size(), ds.series.size());
  for (std::size_t k = 0; k < ds.series.size(); ++k) {
    EXPECT_EQ(back.series[k].values, ds.series[k].values);
  }
  ASSERT_EQ(back.attack_intervals().size(), 1u);
  EXPECT_EQ(back.attack_intervals()[0].start, 4000u);
}

}  // namespace
}  // namespace sentinel
