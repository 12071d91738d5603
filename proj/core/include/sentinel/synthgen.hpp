#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sentinel/series.hpp"

namespace sentinel {

struct Sinusoid {
  double amplitude = 1.0;
  double period = 100.0;  // samples
  double phase = 0.0;     // radians
};

/// Deterministic base signal plus Gaussian noise:
///   m_t = offset + slope * t + sum_k A_k sin(2 pi t / P_k + phi_k) + N(0, sigma^2)
struct SignalSpec {
  std::string sensor_id = "sensor";
  std::size_t length = 4800;
  double offset = 0.0;
  std::vector<Sinusoid> components{Sinusoid{}};
  double slope = 0.0;
  double noise_sigma = 0.1;
  std::uint64_t seed = 1;
};

enum class AttackKind { kDDA, kSA, kMSA };
enum class AttackShape { kStepBias, kRamp, kFreezeToValue, kOscillationDamp };

std::string_view to_string(AttackKind kind);
std::string_view to_string(AttackShape shape);

/// Attack window [start, end) and its signal-level signature.
///  - step_bias: adds magnitude * noise_sigma.
///  - ramp: adds a bias growing linearly to magnitude * noise_sigma at the last sample.
///  - freeze_to_value: overwrites with `freeze_value` if set, else with the mean of
///    the L_ref = min(start, 200) samples before the window plus magnitude * noise_sigma.
///  - oscillation_damp: scales the deviation from that pre-window mean by (1 - damping).
/// Class bands on `magnitude` (in units of noise_sigma): MSA < 1, SA in [1, 3], DDA > 3.
struct AttackSpec {
  AttackKind kind = AttackKind::kSA;
  AttackShape shape = AttackShape::kStepBias;
  std::size_t start = 0;
  std::size_t end = 0;
  double magnitude = 0.0;
  std::optional<double> freeze_value;
  double damping = 0.0;
  std::string label;
};

/// ParameterError when the attack violates its invariants (band, damping range).
void validate(const AttackSpec& attack);

SensorSeries generate(const SignalSpec& spec);

/// Applies the attack and records its labeled window. `noise_sigma` sets the
/// unit for magnitude. DataError on overlap with an existing window or a
/// window outside the series.
SensorSeries inject(SensorSeries series, const AttackSpec& attack, double noise_sigma);

struct Scenario {
  std::string name;
  SignalSpec signal;
  AttackSpec attack;
};

/// The seven desk-scale scenarios (MSA1, MSA2, SA1, SA2, SA3, DDA1, DDA2): a
/// 4800-sample timeline at 100 samples/hour, clean for the first 4000
/// samples, attacked on [4000, 4800).
std::vector<Scenario> scenario_catalog(std::uint64_t seed);

/// One series per scenario, named after it.
Dataset scenario_suite(std::uint64_t seed);

}  // namespace sentinel
