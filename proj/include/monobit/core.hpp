#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace monobit {

inline constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

enum class ErrorKind {
  DelaySpreadExceedsSymbol,
  ZeroEnergyWaveform,
  InvalidChannel,
  InvalidProfile,
  ParseError,
  NonMonotoneDelays,
  LengthMismatch,
  EmptyTrainingSet,
  MissingAuxBranches,
  InvalidArgument,
  ConfigError,
  UnknownPreset,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the ErrorKind tags.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// One QPSK symbol as the Gray-coded bit pair (d1, d0), each +1 or -1.
struct SymbolPair {
  int d1 = 1;
  int d0 = 1;

  friend bool operator==(const SymbolPair&, const SymbolPair&) = default;
};

/// Fixed hypothesis order used for every log-likelihood array and for
/// argmax tie-breaking: (1,1), (1,-1), (-1,1), (-1,-1).
inline constexpr std::array<SymbolPair, 4> kHypotheses{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

/// Per-symbol log-likelihood values in kHypotheses order.
using Llf = std::array<double, 4>;

/// Gray map g(d1, d0): (1,1)->0, (1,-1)->pi/2, (-1,1)->-pi/2, (-1,-1)->pi.
constexpr double gray_phase(SymbolPair s) {
  if (s.d1 > 0) return s.d0 > 0 ? 0.0 : std::numbers::pi / 2;
  return s.d0 > 0 ? -std::numbers::pi / 2 : std::numbers::pi;
}

constexpr int hypothesis_index(SymbolPair s) {
  return (s.d1 > 0 ? 0 : 2) + (s.d0 > 0 ? 0 : 1);
}

/// First maximum in kHypotheses order.
inline int argmax_index(const Llf& llf) {
  int best = 0;
  for (int h = 1; h < 4; ++h) {
    if (llf[h] > llf[best]) best = h;
  }
  return best;
}

inline SymbolPair argmax_hypothesis(const Llf& llf) { return kHypotheses[argmax_index(llf)]; }

}  // namespace monobit
