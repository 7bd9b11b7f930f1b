#include "monobit/waveform.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>
#include <vector>

namespace monobit {

namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

/// Windowed ideal low-pass filter on the fine grid, gain chosen so that unit
/// PSD white noise has unit variance after the filter.
struct LowPassFilter {
  std::vector<double> taps;  // index m + half
  int half = 0;
  double dt = 0.0;

  LowPassFilter(const SamplingGrid& grid, int oversample) {
    const double b = grid.bandwidth;
    dt = grid.sample_period() / oversample;
    const double span = 8.0 / b;
    half = static_cast<int>(std::floor(span / dt));
    taps.resize(static_cast<std::size_t>(2 * half + 1));
    const double gain = 1.0 / std::sqrt(grid.noise_psd * b);
    double energy = 0.0;
    for (int m = -half; m <= half; ++m) {
      const double t = m * dt;
      const double ideal = 2.0 * b * sinc(2.0 * b * t);  // sin(2 pi B t) / (pi t)
      const double window = 0.5 * (1.0 + std::cos(std::numbers::pi * t / span));
      const double h = gain * ideal * window;
      taps[static_cast<std::size_t>(m + half)] = h;
      energy += h * h * dt;
    }
    // (N0 / 2) * integral h^2 must equal one.
    const double renorm = 1.0 / std::sqrt(0.5 * grid.noise_psd * energy);
    for (auto& h : taps) h *= renorm;
  }
};

}  // namespace

void PulseSpec::validate() const {
  if (!(tau > 0.0) || !(beta >= 0.0 && beta <= 1.0) || oversample < 4) {
    throw Error(ErrorKind::InvalidArgument, "pulse spec requires tau > 0, 0 <= beta <= 1, oversample >= 4");
  }
}

double raised_cosine(double t, const PulseSpec& spec) {
  const double x = t / spec.tau;
  const double b = spec.beta;
  const double denom = 1.0 - 4.0 * b * b * x * x;
  if (std::abs(denom) < 1e-10) {
    // Removable singularity at |t| = tau / (2 beta).
    return std::numbers::pi / 4.0 * sinc(1.0 / (2.0 * b));
  }
  return sinc(x) * std::cos(std::numbers::pi * b * x) / denom;
}

ReferenceWaveform build_reference(const PulseSpec& spec, const ChannelRealization& channel,
                                  const SamplingGrid& grid) {
  spec.validate();
  if (grid.symbol_samples < 1 || !(grid.bandwidth > 0.0) || !(grid.noise_psd > 0.0) ||
      grid.resolved_peak_index() >= grid.symbol_samples) {
    throw Error(ErrorKind::InvalidArgument, "invalid sampling grid");
  }
  if (!channel.is_real()) {
    throw Error(ErrorKind::InvalidChannel, "complex tap gains are not supported by the real reference model");
  }
  if (channel.max_delay() >= grid.symbol_duration()) {
    throw Error(ErrorKind::DelaySpreadExceedsSymbol, "channel taps extend beyond the symbol duration");
  }

  const LowPassFilter lpf(grid, spec.oversample);
  std::unordered_map<double, double> memo;
  auto filtered_pulse = [&](double t) {
    if (auto it = memo.find(t); it != memo.end()) return it->second;
    double acc = 0.0;
    for (int m = -lpf.half; m <= lpf.half; ++m) {
      acc += raised_cosine(t - m * lpf.dt, spec) * lpf.taps[static_cast<std::size_t>(m + lpf.half)];
    }
    acc *= lpf.dt;
    memo.emplace(t, acc);
    return acc;
  };

  const double period = grid.sample_period();
  const int peak = grid.resolved_peak_index();
  ReferenceWaveform ref{Vector<double>::Zero(grid.symbol_samples), period};
  for (int l = 0; l < grid.symbol_samples; ++l) {
    const double t = (l - peak) * period;
    double acc = 0.0;
    for (const auto& tap : channel.taps) acc += tap.gain.real() * filtered_pulse(t - tap.delay);
    ref.samples[l] = acc;
  }
  return ref;
}

}  // namespace monobit
