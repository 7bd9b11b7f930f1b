#pragma once

#include "monobit/channel.hpp"
#include "monobit/core.hpp"
#include "monobit/waveform.hpp"

#include <complex>
#include <cstdint>
#include <span>

namespace monobit {

/// Receiver IQ imbalance: r_d = mu * r + nu * conj(r).
struct ImbalanceParams {
  double alpha = 0.0;  // amplitude imbalance, |alpha| < 1
  double theta = 0.0;  // phase deviation from 90 degrees, radians

  std::complex<double> mu() const;
  std::complex<double> nu() const;
  void validate() const;
};

/// Sign bits (+1/-1) or real samples of one or more symbols, one column per
/// symbol and one row per sample. sum/diff hold the (I+Q)/sqrt(2) and
/// (I-Q)/sqrt(2) branches and are empty outside 8-sector mode.
template <typename Scalar>
struct FrameBlockT {
  Matrix<Scalar> i, q, sum, diff;

  Index samples() const { return i.rows(); }
  Index symbols() const { return i.cols(); }
  bool has_aux() const { return sum.size() != 0 && diff.size() != 0; }
};

using FrameBlock = FrameBlockT<double>;

/// A single symbol's frame: a block with exactly one column.
struct QuantizedFrame : FrameBlock {};

enum class SamplingMode { monobit, phase8, full_resolution };

Vector<std::complex<double>> apply_iq_imbalance(const Vector<std::complex<double>>& baseband,
                                                const ImbalanceParams& p);

/// +1 for strictly positive input, -1 otherwise.
template <typename Scalar>
constexpr Scalar sign_bit(Scalar x) {
  return x > Scalar(0) ? Scalar(1) : Scalar(-1);
}

template <typename Derived>
auto quantize_monobit(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  return x.unaryExpr([](Scalar v) { return sign_bit(v); });
}

/// Four-branch 8-sector phase quantization of one symbol.
QuantizedFrame quantize_phase8(const Vector<double>& i_samples, const Vector<double>& q_samples);

/// Eight 45-degree sector index in [0, 8) identified by the four sign bits of
/// one sample, counted counter-clockwise from the sector starting at 0 rad.
int phase_sector(double i_bit, double q_bit, double sum_bit, double diff_bit);

/// Baseband samples e^{j(g - phi)} p_ref(lT) plus unit-variance complex noise,
/// distorted by the IQ imbalance and then quantized per mode. The noise for
/// symbol k, sample l is element k * N + l of noise_frame(noise_seed, K * N).
FrameBlock sample_symbol_stream(const ReferenceWaveform& ref, std::span<const SymbolPair> symbols,
                                PhaseDifference phi, const ImbalanceParams& imbalance,
                                std::uint64_t noise_seed, SamplingMode mode);

/// Same as sample_symbol_stream without noise.
FrameBlock noiseless_symbol_stream(const ReferenceWaveform& ref, std::span<const SymbolPair> symbols,
                                   PhaseDifference phi, const ImbalanceParams& imbalance, SamplingMode mode);

}  // namespace monobit
