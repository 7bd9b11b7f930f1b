#pragma once

#include "monobit/core.hpp"

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace monobit {

struct Tap {
  double delay = 0.0;  // seconds
  std::complex<double> gain{1.0, 0.0};

  friend bool operator==(const Tap&, const Tap&) = default;
};

/// Finite impulse response h(t) as a list of delayed taps.
struct ChannelRealization {
  std::vector<Tap> taps;
  std::string label;

  double total_power() const;
  double max_delay() const;
  bool is_real() const;
};

/// Exponential power-delay profile with uniformly spaced taps.
struct DenseProfile {
  double decay_ns = 3.0;
  int num_taps = 40;
  double spacing_ns = 0.25;
};

/// Clustered profile: a few clusters over cluster_span_ns, each with one
/// leading ray plus Poisson(ray_rate) extra rays.
struct SparseProfile {
  int num_clusters = 3;
  double cluster_span_ns = 10.0;
  double ray_rate = 1.0;
};

struct PhaseDifference {
  double phi = 0.0;  // radians in [0, 2*pi)

  static PhaseDifference from_radians(double radians);
  double degrees() const;
};

ChannelRealization awgn_channel();
ChannelRealization dense_multipath(std::uint64_t seed, const DenseProfile& profile = {});
ChannelRealization sparse_multipath(std::uint64_t seed, const SparseProfile& profile = {});

/// Text format: one "delay_seconds,real_gain,imag_gain" per line, '#' starts
/// a comment, delays strictly increasing. Taps are returned as stored.
ChannelRealization load_channel_file(const std::filesystem::path& path);
ChannelRealization parse_channel_text(const std::string& text, const std::string& label = "text");
void save_channel_file(const ChannelRealization& channel, const std::filesystem::path& path);

PhaseDifference draw_phase(std::uint64_t seed);
PhaseDifference fixed_phase(double degrees);

/// i.i.d. complex samples with N(0,1) real and imaginary parts.
Vector<std::complex<double>> noise_frame(std::uint64_t seed, Index n_samples);

}  // namespace monobit
