#pragma once

#include "monobit/core.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace monobit {

/// Bit log-likelihood ratios; positive favors +1.
struct BitLLR {
  double llr0 = 0.0;
  double llr1 = 0.0;
};

BitLLR llr_exact(const Llf& llf);
BitLLR llr_maxlog(const Llf& llf);

/// Rate-1/2 feedforward code, constraint length 7, generators 133 and 171
/// (octal), terminated with six zero tail bits.
struct ConvCode {
  static constexpr int kConstraint = 7;
  static constexpr int kMemory = kConstraint - 1;
  static constexpr int kStates = 1 << kMemory;
  static constexpr unsigned kG0 = 0133;
  static constexpr unsigned kG1 = 0171;

  static std::size_t coded_length(std::size_t info_bits) { return 2 * (info_bits + kMemory); }
};

/// Bits are 0/1. The output has 2 * (bits.size() + 6) entries, the two
/// generator outputs interleaved per input bit.
std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> bits);

/// Maximum-likelihood sequence decoding with branch metric sum(d * llr / 2),
/// where coded bit b maps to d = 1 - 2b. Returns the information bits.
std::vector<std::uint8_t> soft_decode(std::span<const double> llrs);

/// Same trellis on +1/-1 hard decisions (Hamming metric).
std::vector<std::uint8_t> hard_decode(std::span<const int> decisions);

/// Coded bit b as a +1/-1 symbol component.
constexpr int bit_to_symbol(std::uint8_t b) { return b ? -1 : 1; }
constexpr std::uint8_t symbol_to_bit(double d) { return d > 0.0 ? 0 : 1; }

}  // namespace monobit
