#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vru/channel.hpp"
#include "vru/ingest.hpp"
#include "vru/labels.hpp"

namespace vru {

/// One channel's recipe: harmonics of a base frequency plus slow drift and
/// Gaussian noise. Amplitudes are fixture constants, not measurements.
struct ChannelRecipe {
  double offset = 0.0;
  double base_hz = 1.0;
  std::vector<double> harmonics;  // amplitude of harmonic h + 1
  double noise_sd = 0.0;
  double drift_amp = 0.0;
  double drift_hz = 0.1;
};

struct ModeProfile {
  Mode mode = Mode::walk;
  std::array<ChannelRecipe, kChannelCount> channels;

  /// Throws invalid_input unless every base frequency lies in (0, rate/2),
  /// noise sd >= 0 and all values are finite.
  void validate(double rate_hz) const;
};

/// Built-in labeled fixture profile for each mode.
ModeProfile default_profile(Mode mode);

struct SynthStream {
  std::array<TimeSeries, kChannelCount> channels;
  std::vector<Mode> labels;  // one per whole second
};

/// Samples t = 0, 1/rate, …, duration_s (inclusive, so the last whole epoch
/// survives resampling). The seed drives the noise and drift phase only;
/// harmonic phases are fixed per channel.
SynthStream generate(const ModeProfile& profile, double duration_s, double rate_hz, std::uint64_t seed);

struct SynthSuiteConfig {
  std::size_t epochs_per_mode = 1000;
  std::size_t sessions_per_mode = 10;
  double rate_hz = 25.0;
  std::uint64_t seed = 1;
  /// Per-session relative jitter of base frequency, amplitudes and noise.
  double frequency_jitter = 0.08;
  double amplitude_jitter = 0.15;
  double noise_jitter = 0.05;
};

struct SynthSession {
  Mode mode;
  SynthStream stream;
};

/// Sessions for all five modes (mode-major order), each with its own
/// jittered copy of the default profile.
std::vector<SynthSession> generate_suite(const SynthSuiteConfig& config);

/// Ingest log rows `<channel>,<timestamp_ms>,<value>`, time-major.
void write_log(std::ostream& out, const SynthStream& stream);
/// Label sidecar rows `<epoch_index>,<mode>`.
void write_labels(std::ostream& out, const SynthStream& stream);

}  // namespace vru
