#include "vru/synth.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "vru/error.hpp"
#include "vru/rng.hpp"
#include "vru/textio.hpp"

namespace vru {

void ModeProfile::validate(double rate_hz) const {
  if (!(rate_hz > 0.0)) throw Error(ErrorKind::invalid_input, "synthetic rate must be positive");
  for (ChannelId c : all_channels()) {
    const auto& r = channels[c.index()];
    const auto where = std::string(mode_name(mode)) + "/" + channel_name(c);
    if (!(r.base_hz > 0.0) || !(r.base_hz < rate_hz / 2.0)) {
      throw Error(ErrorKind::invalid_input, where + ": base frequency must lie in (0, rate/2)");
    }
    if (!(r.noise_sd >= 0.0) || !std::isfinite(r.noise_sd)) {
      throw Error(ErrorKind::invalid_input, where + ": noise sd must be finite and non-negative");
    }
    bool finite = std::isfinite(r.offset) && std::isfinite(r.drift_amp) && std::isfinite(r.drift_hz);
    for (double a : r.harmonics) finite = finite && std::isfinite(a);
    if (!finite) throw Error(ErrorKind::invalid_input, where + ": non-finite recipe value");
  }
}

namespace {

// Sensor-level scales: accelerometer in m/s^2, gyroscope in rad/s, rotation
// vector components (unitless, small excursions).
struct SensorShape {
  double acc_amp, gyr_amp, rot_amp;
  double acc_noise, gyr_noise, rot_noise;
  double drift_acc, drift_gyr, drift_rot;
  double drift_hz;
};

ModeProfile build(Mode mode, double base_hz, std::vector<double> harmonic_shape, const SensorShape& s) {
  ModeProfile p;
  p.mode = mode;
  // Per-axis weights give each axis its own signature.
  constexpr std::array<double, 3> axis_weight = {0.6, 0.8, 1.0};
  for (ChannelId c : all_channels()) {
    auto& r = p.channels[c.index()];
    const double w = axis_weight[static_cast<std::size_t>(c.axis)];
    double amp = 0.0, noise = 0.0, drift = 0.0;
    switch (c.sensor) {
      case Sensor::accelerometer: amp = s.acc_amp; noise = s.acc_noise; drift = s.drift_acc; break;
      case Sensor::gyroscope: amp = s.gyr_amp; noise = s.gyr_noise; drift = s.drift_gyr; break;
      case Sensor::rotation_vector: amp = s.rot_amp; noise = s.rot_noise; drift = s.drift_rot; break;
    }
    r.offset = c == ChannelId{Sensor::accelerometer, Axis::z} ? 9.81 : 0.0;
    if (c.sensor == Sensor::rotation_vector) r.offset = 0.1 * static_cast<double>(c.index() - 5);
    r.base_hz = base_hz;
    for (double h : harmonic_shape) r.harmonics.push_back(amp * w * h);
    r.noise_sd = noise;
    r.drift_amp = drift * w;
    r.drift_hz = s.drift_hz;
  }
  return p;
}

}  // namespace

ModeProfile default_profile(Mode mode) {
  switch (mode) {
    case Mode::walk:
      return build(mode, 1.9, {1.0, 0.45, 0.2},
                   {1.6, 0.9, 0.012, 0.30, 0.12, 0.002, 0.3, 0.1, 0.004, 0.15});
    case Mode::run:
      return build(mode, 2.7, {1.0, 0.5, 0.25},
                   {3.0, 1.7, 0.020, 0.55, 0.22, 0.003, 0.4, 0.15, 0.005, 0.15});
    case Mode::bike:
      return build(mode, 1.3, {1.0, 0.15},
                   {0.8, 0.5, 0.008, 0.22, 0.09, 0.0015, 0.5, 0.15, 0.006, 0.1});
    case Mode::bus:
      // Vehicles: weak engine/road vibration over broadband noise and slow sway.
      return build(mode, 0.8, {1.0},
                   {0.05, 0.02, 0.0004, 0.335, 0.056, 0.00115, 0.65, 0.095, 0.0075, 0.1});
    case Mode::car:
      return build(mode, 0.85, {1.0},
                   {0.05, 0.02, 0.0004, 0.32, 0.054, 0.0011, 0.6, 0.09, 0.007, 0.1});
  }
  throw Error(ErrorKind::invalid_input, "unknown mode");
}

SynthStream generate(const ModeProfile& profile, double duration_s, double rate_hz, std::uint64_t seed) {
  profile.validate(rate_hz);
  if (!(duration_s >= 1.0)) throw Error(ErrorKind::invalid_input, "synthetic duration must be at least 1 s");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz)) + 1;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  SynthStream out;
  for (ChannelId c : all_channels()) {
    const auto& r = profile.channels[c.index()];
    Rng rng(mix_seed(seed, c.index()));
    const double drift_phase = two_pi * rng.uniform();
    auto& ts = out.channels[c.index()];
    ts.channel = c;
    ts.rate_hz = rate_hz;
    ts.first_index = 0;
    ts.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / rate_hz;
      double v = r.offset;
      for (std::size_t h = 0; h < r.harmonics.size(); ++h) {
        const double phase = 0.7 * static_cast<double>(c.index()) + 0.3 * static_cast<double>(h);
        v += r.harmonics[h] * std::sin(two_pi * static_cast<double>(h + 1) * r.base_hz * t + phase);
      }
      if (r.drift_amp != 0.0) v += r.drift_amp * std::sin(two_pi * r.drift_hz * t + drift_phase);
      if (r.noise_sd != 0.0) v += r.noise_sd * rng.normal();
      ts.values[k] = v;
    }
  }
  out.labels.assign(static_cast<std::size_t>(std::floor(duration_s)), profile.mode);
  return out;
}

std::vector<SynthSession> generate_suite(const SynthSuiteConfig& config) {
  if (config.sessions_per_mode == 0 || config.epochs_per_mode < config.sessions_per_mode) {
    throw Error(ErrorKind::invalid_input, "each session needs at least one epoch");
  }
  std::vector<SynthSession> sessions;
  std::uint64_t stream = 0;
  for (Mode mode : kAllModes) {
    for (std::size_t s = 0; s < config.sessions_per_mode; ++s, ++stream) {
      // Spread epochs as evenly as possible across sessions.
      const std::size_t epochs = config.epochs_per_mode / config.sessions_per_mode +
                                 (s < config.epochs_per_mode % config.sessions_per_mode ? 1 : 0);
      Rng jitter(mix_seed(config.seed, 2 * stream));
      auto profile = default_profile(mode);
      const double f_scale = 1.0 + config.frequency_jitter * (2.0 * jitter.uniform() - 1.0);
      for (auto& r : profile.channels) {
        r.base_hz *= f_scale;
        const double a_scale = 1.0 + config.amplitude_jitter * (2.0 * jitter.uniform() - 1.0);
        for (double& a : r.harmonics) a *= a_scale;
        r.drift_amp *= a_scale;
        r.noise_sd *= 1.0 + config.noise_jitter * (2.0 * jitter.uniform() - 1.0);
      }
      sessions.push_back({mode, generate(profile, static_cast<double>(epochs), config.rate_hz,
                                         mix_seed(config.seed, 2 * stream + 1))});
    }
  }
  return sessions;
}

void write_log(std::ostream& out, const SynthStream& stream) {
  const std::size_t n = stream.channels[0].values.size();
  const double rate = stream.channels[0].rate_hz;
  std::array<std::string, kChannelCount> names;
  for (ChannelId c : all_channels()) names[c.index()] = channel_name(c);
  for (std::size_t k = 0; k < n; ++k) {
    const auto ts = std::llround(static_cast<double>(k) * 1000.0 / rate);
    for (std::size_t c = 0; c < kChannelCount; ++c) {
      out << names[c] << ',' << ts << ',' << format_double(stream.channels[c].values[k]) << '\n';
    }
  }
}

void write_labels(std::ostream& out, const SynthStream& stream) {
  for (std::size_t e = 0; e < stream.labels.size(); ++e) out << e << ',' << mode_name(stream.labels[e]) << '\n';
}

}  // namespace vru
