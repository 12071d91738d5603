#include "sentinel/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "sentinel/errors.hpp"

namespace sentinel {

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kDDA:
      return "DDA";
    case AttackKind::kSA:
      return "SA";
    case AttackKind::kMSA:
      return "MSA";
  }
  return "?";
}

std::string_view to_string(AttackShape shape) {
  switch (shape) {
    case AttackShape::kStepBias:
      return "step_bias";
    case AttackShape::kRamp:
      return "ramp";
    case AttackShape::kFreezeToValue:
      return "freeze_to_value";
    case AttackShape::kOscillationDamp:
      return "oscillation_damp";
  }
  return "?";
}

void validate(const AttackSpec& attack) {
  if (attack.start >= attack.end) throw ParameterError("attack window is empty or inverted");
  if (attack.shape == AttackShape::kOscillationDamp) {
    if (!(attack.damping >= 0.0 && attack.damping <= 1.0)) {
      throw ParameterError("oscillation_damp: damping must lie in [0, 1]");
    }
    return;
  }
  if (attack.shape == AttackShape::kFreezeToValue && attack.freeze_value) return;

  const double mag = std::abs(attack.magnitude);
  switch (attack.kind) {
    case AttackKind::kMSA:
      if (!(mag < 1.0)) throw ParameterError("MSA magnitude must be below 1 noise sigma");
      break;
    case AttackKind::kSA:
      if (mag < 1.0 || mag > 3.0) throw ParameterError("SA magnitude must lie in [1, 3] noise sigma");
      break;
    case AttackKind::kDDA:
      if (!(mag > 3.0)) throw ParameterError("DDA magnitude must exceed 3 noise sigma");
      break;
  }
}

SensorSeries generate(const SignalSpec& spec) {
  if (spec.components.empty()) throw ParameterError("signal needs at least one sinusoid");
  if (!(spec.noise_sigma >= 0.0)) throw ParameterError("noise_sigma must be non-negative");
  for (const auto& c : spec.components) {
    if (!(c.period > 0.0)) throw ParameterError("sinusoid period must be positive");
  }

  SensorSeries out;
  out.sensor_id = spec.sensor_id;
  out.values.resize(spec.length);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t t = 0; t < spec.length; ++t) {
    const double td = static_cast<double>(t);
    double v = spec.offset + spec.slope * td;
    for (const auto& c : spec.components) {
      v += c.amplitude * std::sin(2.0 * std::numbers::pi * td / c.period + c.phase);
    }
    const double z = noise(rng);
    if (spec.noise_sigma > 0.0) v += spec.noise_sigma * z;
    out.values[t] = v;
  }
  return out;
}

SensorSeries inject(SensorSeries series, const AttackSpec& attack, double noise_sigma) {
  validate(attack);
  AttackInterval window{attack.start, attack.end,
                        attack.label.empty() ? std::string(to_string(attack.kind)) : attack.label};
  auto intervals = series.attack_intervals;
  intervals.push_back(window);
  validate_intervals(intervals, series.size());

  const double bias = attack.magnitude * noise_sigma;
  const std::size_t ref_len = std::min<std::size_t>(attack.start, 200);
  double ref_mean = 0.0;
  if (ref_len > 0) {
    for (std::size_t i = attack.start - ref_len; i < attack.start; ++i) ref_mean += series.values[i];
    ref_mean /= static_cast<double>(ref_len);
  } else {
    ref_mean = series.values[attack.start];
  }

  const double span = static_cast<double>(attack.end - attack.start);
  for (std::size_t i = attack.start; i < attack.end; ++i) {
    double& v = series.values[i];
    switch (attack.shape) {
      case AttackShape::kStepBias:
        v += bias;
        break;
      case AttackShape::kRamp:
        v += bias * static_cast<double>(i - attack.start + 1) / span;
        break;
      case AttackShape::kFreezeToValue:
        v = attack.freeze_value ? *attack.freeze_value : ref_mean + bias;
        break;
      case AttackShape::kOscillationDamp:
        v = ref_mean + (1.0 - attack.damping) * (v - ref_mean);
        break;
    }
  }
  series.attack_intervals = std::move(intervals);
  std::sort(series.attack_intervals.begin(), series.attack_intervals.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  return series;
}

std::vector<Scenario> scenario_catalog(std::uint64_t seed) {
  constexpr std::size_t kLength = 4800;
  constexpr std::size_t kAttackStart = 4000;
  constexpr double kSigma = 0.1;

  auto base = [&](const std::string& name, std::uint64_t index, double phase) {
    SignalSpec s;
    s.sensor_id = name;
    s.length = kLength;
    s.offset = 50.0;
    s.components = {Sinusoid{1.0, 100.0, phase}};
    s.noise_sigma = kSigma;
    s.seed = seed * 1000003ULL + index;
    return s;
  };
  auto attack = [&](AttackKind kind, AttackShape shape, double magnitude, const std::string& label) {
    AttackSpec a;
    a.kind = kind;
    a.shape = shape;
    a.start = kAttackStart;
    a.end = kLength;
    a.magnitude = magnitude;
    a.label = label;
    return a;
  };

  std::vector<Scenario> out;
  // Micro-stealthy: sub-noise level shifts.
  out.push_back({"MSA1", base("MSA1", 0, 0.0),
                 attack(AttackKind::kMSA, AttackShape::kStepBias, 0.6, "MSA1")});
  out.push_back({"MSA2", base("MSA2", 1, 0.7),
                 attack(AttackKind::kMSA, AttackShape::kRamp, 0.8, "MSA2")});
  // Stealthy: within a few noise sigmas.
  out.push_back({"SA1", base("SA1", 2, 1.4),
                 attack(AttackKind::kSA, AttackShape::kRamp, 2.5, "SA1")});
  out.push_back({"SA2", base("SA2", 3, 2.1),
                 attack(AttackKind::kSA, AttackShape::kStepBias, 1.2, "SA2")});
  out.push_back({"SA3", base("SA3", 4, 2.8),
                 attack(AttackKind::kSA, AttackShape::kFreezeToValue, 1.5, "SA3")});
  // Direct damage.
  out.push_back({"DDA1", base("DDA1", 5, 3.5),
                 attack(AttackKind::kDDA, AttackShape::kRamp, 8.0, "DDA1")});
  Scenario dda2{"DDA2", base("DDA2", 6, 4.2),
                attack(AttackKind::kDDA, AttackShape::kFreezeToValue, 0.0, "DDA2")};
  dda2.attack.freeze_value = 0.0;
  out.push_back(std::move(dda2));
  return out;
}

Dataset scenario_suite(std::uint64_t seed) {
  Dataset ds;
  ds.name = "scenario_suite";
  for (const auto& sc : scenario_catalog(seed)) {
    SensorSeries s = inject(generate(sc.signal), sc.attack, sc.signal.noise_sigma);
    // One plant-wide window shared by every member series.
    for (auto& iv : s.attack_intervals) iv.label = "attack";
    ds.series.push_back(std::move(s));
  }
  ds.timestamps.reserve(ds.length());
  for (std::size_t i = 0; i < ds.length(); ++i) ds.timestamps.push_back(std::to_string(i));
  validate_dataset(ds);
  return ds;
}

}  // namespace sentinel
