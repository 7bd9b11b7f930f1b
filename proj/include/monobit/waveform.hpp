#pragma once

#include "monobit/channel.hpp"
#include "monobit/core.hpp"

#include <cmath>

namespace monobit {

/// Raised-cosine transmit pulse parameters.
struct PulseSpec {
  double tau = 0.5e-9;  // time constant, seconds
  double beta = 1.0;    // roll-off
  int oversample = 16;  // fine-grid factor relative to the Nyquist period

  void validate() const;
};

/// Receive-side sampling: ideal LPF of bandwidth B sampled at T = 1/(2B),
/// N samples per symbol with the zero-delay pulse peak at peak_index.
struct SamplingGrid {
  double bandwidth = 5e9;
  double noise_psd = 1.0;
  int symbol_samples = 32;
  int peak_index = -1;  // negative selects symbol_samples / 2

  double sample_period() const { return 1.0 / (2.0 * bandwidth); }
  double symbol_duration() const { return symbol_samples * sample_period(); }
  int resolved_peak_index() const { return peak_index < 0 ? symbol_samples / 2 : peak_index; }
};

/// Samples p_ref(lT) of pulse * channel * receive filter in units of the
/// post-sampling noise standard deviation.
template <typename Scalar>
struct ReferenceWaveformT {
  Vector<Scalar> samples;
  double sample_period = 0.0;

  Index symbol_len() const { return samples.size(); }
  Scalar energy() const { return samples.squaredNorm(); }
  /// Sum of p_ref^2(lT) in dB, the per-symbol SNR.
  double ebn0_db() const { return 10.0 * std::log10(static_cast<double>(energy())); }
};

using ReferenceWaveform = ReferenceWaveformT<double>;

double raised_cosine(double t, const PulseSpec& spec);

/// Throws DelaySpreadExceedsSymbol when a tap lies beyond the symbol duration
/// and InvalidChannel for complex-valued taps.
ReferenceWaveform build_reference(const PulseSpec& spec, const ChannelRealization& channel,
                                  const SamplingGrid& grid);

template <typename Scalar>
ReferenceWaveformT<Scalar> scale_to_snr(const ReferenceWaveformT<Scalar>& ref, double target_ebn0_db) {
  const Scalar e = ref.energy();
  if (!(e > Scalar(0))) throw Error(ErrorKind::ZeroEnergyWaveform, "reference has no energy");
  const Scalar gain = std::sqrt(Scalar(std::pow(10.0, target_ebn0_db / 10.0)) / e);
  return ReferenceWaveformT<Scalar>{ref.samples * gain, ref.sample_period};
}

}  // namespace monobit
