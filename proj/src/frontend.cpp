#include "monobit/frontend.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace monobit {

namespace {

/// e^{j g(d1, d0)} without rounding error.
std::complex<double> gray_unit(SymbolPair s) {
  if (s.d1 > 0) return s.d0 > 0 ? std::complex<double>{1.0, 0.0} : std::complex<double>{0.0, 1.0};
  return s.d0 > 0 ? std::complex<double>{0.0, -1.0} : std::complex<double>{-1.0, 0.0};
}

FrameBlock allocate(Index n, Index k, SamplingMode mode) {
  FrameBlock block;
  block.i.resize(n, k);
  block.q.resize(n, k);
  if (mode == SamplingMode::phase8) {
    block.sum.resize(n, k);
    block.diff.resize(n, k);
  }
  return block;
}

void store(FrameBlock& block, Index l, Index k, std::complex<double> r, SamplingMode mode) {
  const double i = r.real();
  const double q = r.imag();
  switch (mode) {
    case SamplingMode::full_resolution:
      block.i(l, k) = i;
      block.q(l, k) = q;
      break;
    case SamplingMode::phase8:
      block.sum(l, k) = sign_bit((i + q) * kInvSqrt2);
      block.diff(l, k) = sign_bit((i - q) * kInvSqrt2);
      [[fallthrough]];
    case SamplingMode::monobit:
      block.i(l, k) = sign_bit(i);
      block.q(l, k) = sign_bit(q);
      break;
  }
}

template <typename NoiseFn>
FrameBlock synthesize(const ReferenceWaveform& ref, std::span<const SymbolPair> symbols, PhaseDifference phi,
                      const ImbalanceParams& imbalance, SamplingMode mode, NoiseFn noise) {
  if (symbols.empty()) throw Error(ErrorKind::InvalidArgument, "symbol stream is empty");
  imbalance.validate();
  const Index n = ref.symbol_len();
  const Index k_count = static_cast<Index>(symbols.size());
  const auto mu = imbalance.mu();
  const auto nu = imbalance.nu();
  const std::complex<double> derotation{std::cos(phi.phi), -std::sin(phi.phi)};
  FrameBlock block = allocate(n, k_count, mode);
  for (Index k = 0; k < k_count; ++k) {
    const auto rot = gray_unit(symbols[static_cast<std::size_t>(k)]) * derotation;
    for (Index l = 0; l < n; ++l) {
      const std::complex<double> r = rot * ref.samples[l] + noise(k * n + l);
      store(block, l, k, mu * r + nu * std::conj(r), mode);
    }
  }
  return block;
}

}  // namespace

std::complex<double> ImbalanceParams::mu() const {
  return {std::cos(theta / 2.0), -alpha * std::sin(theta / 2.0)};
}

std::complex<double> ImbalanceParams::nu() const {
  return {alpha * std::cos(theta / 2.0), std::sin(theta / 2.0)};
}

void ImbalanceParams::validate() const {
  if (!(std::abs(alpha) < 1.0) || !(std::abs(theta) < std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidArgument, "imbalance requires |alpha| < 1 and |theta| < pi/2");
  }
}

Vector<std::complex<double>> apply_iq_imbalance(const Vector<std::complex<double>>& baseband,
                                                const ImbalanceParams& p) {
  const auto mu = p.mu();
  const auto nu = p.nu();
  return baseband.unaryExpr([mu, nu](std::complex<double> r) { return mu * r + nu * std::conj(r); });
}

QuantizedFrame quantize_phase8(const Vector<double>& i_samples, const Vector<double>& q_samples) {
  if (i_samples.size() != q_samples.size()) {
    throw Error(ErrorKind::LengthMismatch, "I and Q sample vectors differ in length");
  }
  QuantizedFrame frame;
  frame.i = quantize_monobit(i_samples);
  frame.q = quantize_monobit(q_samples);
  frame.sum = quantize_monobit((i_samples + q_samples) * kInvSqrt2);
  frame.diff = quantize_monobit((i_samples - q_samples) * kInvSqrt2);
  return frame;
}

int phase_sector(double i_bit, double q_bit, double sum_bit, double diff_bit) {
  // Index bits: I, Q, I+Q, I-Q positive. Unreachable patterns map to -1.
  static constexpr std::array<int, 16> table = {
      //  I Q S D
      4,   // - - - -
      5,   // - - - +
      -1,  // - - + -
      -1,  // - - + +
      3,   // - + - -
      -1,  // - + - +
      2,   // - + + -
      -1,  // - + + +
      -1,  // + - - -
      6,   // + - - +
      -1,  // + - + -
      7,   // + - + +
      -1,  // + + - -
      -1,  // + + - +
      1,   // + + + -
      0,   // + + + +
  };
  const int idx = (i_bit > 0 ? 8 : 0) + (q_bit > 0 ? 4 : 0) + (sum_bit > 0 ? 2 : 0) + (diff_bit > 0 ? 1 : 0);
  return table[static_cast<std::size_t>(idx)];
}

FrameBlock sample_symbol_stream(const ReferenceWaveform& ref, std::span<const SymbolPair> symbols,
                                PhaseDifference phi, const ImbalanceParams& imbalance,
                                std::uint64_t noise_seed, SamplingMode mode) {
  const auto noise = noise_frame(noise_seed, ref.symbol_len() * static_cast<Index>(symbols.size()));
  return synthesize(ref, symbols, phi, imbalance, mode, [&noise](Index idx) { return noise[idx]; });
}

FrameBlock noiseless_symbol_stream(const ReferenceWaveform& ref, std::span<const SymbolPair> symbols,
                                   PhaseDifference phi, const ImbalanceParams& imbalance, SamplingMode mode) {
  return synthesize(ref, symbols, phi, imbalance, mode, [](Index) { return std::complex<double>{}; });
}

}  // namespace monobit
