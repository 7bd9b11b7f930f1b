#include "monobit/coding.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>

namespace monobit {

namespace {

double logsumexp2(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Trellis {
  // Output pair for (state, input): bits of g0 and g1 over [input, state].
  std::array<std::array<std::uint8_t, 2>, ConvCode::kStates * 2> out{};

  Trellis() {
    for (int s = 0; s < ConvCode::kStates; ++s) {
      for (int u = 0; u < 2; ++u) {
        const unsigned reg = (static_cast<unsigned>(u) << ConvCode::kMemory) | static_cast<unsigned>(s);
        out[static_cast<std::size_t>(2 * s + u)] = {static_cast<std::uint8_t>(std::popcount(reg & ConvCode::kG0) & 1),
                                                    static_cast<std::uint8_t>(std::popcount(reg & ConvCode::kG1) & 1)};
      }
    }
  }

  static int next_state(int s, int u) { return (s >> 1) | (u << (ConvCode::kMemory - 1)); }
};

const Trellis& trellis() {
  static const Trellis t;
  return t;
}

/// Viterbi over metrics m[2k], m[2k+1] that score coded bit 0 as +m and 1 as -m.
std::vector<std::uint8_t> viterbi(std::span<const double> metric) {
  if (metric.size() % 2 != 0 || metric.size() < 2 * (ConvCode::kMemory + 1)) {
    throw Error(ErrorKind::LengthMismatch, "coded length must be even and cover the tail");
  }
  const std::size_t steps = metric.size() / 2;
  const std::size_t info = steps - ConvCode::kMemory;
  constexpr double kNeg = -std::numeric_limits<double>::infinity();
  const Trellis& t = trellis();

  std::vector<double> pm(ConvCode::kStates, kNeg), next(ConvCode::kStates);
  pm[0] = 0.0;
  std::vector<std::uint8_t> decisions(steps * ConvCode::kStates);  // surviving input bit
  std::vector<std::uint8_t> from(steps * ConvCode::kStates);        // predecessor low bit
  for (std::size_t k = 0; k < steps; ++k) {
    std::fill(next.begin(), next.end(), kNeg);
    const double m0 = metric[2 * k];
    const double m1 = metric[2 * k + 1];
    const int max_input = k < info ? 1 : 0;
    for (int s = 0; s < ConvCode::kStates; ++s) {
      if (pm[static_cast<std::size_t>(s)] == kNeg) continue;
      for (int u = 0; u <= max_input; ++u) {
        const auto& o = t.out[static_cast<std::size_t>(2 * s + u)];
        const double cand = pm[static_cast<std::size_t>(s)] + (o[0] ? -m0 : m0) + (o[1] ? -m1 : m1);
        const int ns = Trellis::next_state(s, u);
        if (cand > next[static_cast<std::size_t>(ns)]) {
          next[static_cast<std::size_t>(ns)] = cand;
          decisions[k * ConvCode::kStates + static_cast<std::size_t>(ns)] = static_cast<std::uint8_t>(u);
          from[k * ConvCode::kStates + static_cast<std::size_t>(ns)] = static_cast<std::uint8_t>(s & 1);
        }
      }
    }
    pm.swap(next);
  }

  std::vector<std::uint8_t> bits(steps);
  int s = 0;  // terminated trellis ends in the zero state
  for (std::size_t k = steps; k-- > 0;) {
    const std::size_t idx = k * ConvCode::kStates + static_cast<std::size_t>(s);
    bits[k] = decisions[idx];
    s = ((s << 1) & (ConvCode::kStates - 1)) | from[idx];
  }
  bits.resize(info);
  return bits;
}

}  // namespace

BitLLR llr_exact(const Llf& l) {
  // Order (1,1), (1,-1), (-1,1), (-1,-1).
  BitLLR r;
  r.llr0 = logsumexp2(l[0], l[2]) - logsumexp2(l[1], l[3]);
  r.llr1 = logsumexp2(l[0], l[1]) - logsumexp2(l[2], l[3]);
  return r;
}

BitLLR llr_maxlog(const Llf& l) {
  BitLLR r;
  r.llr0 = std::max(l[0], l[2]) - std::max(l[1], l[3]);
  r.llr1 = std::max(l[0], l[1]) - std::max(l[2], l[3]);
  return r;
}

std::vector<std::uint8_t> conv_encode(std::span<const std::uint8_t> bits) {
  if (bits.empty()) throw Error(ErrorKind::InvalidArgument, "encoder input is empty");
  std::vector<std::uint8_t> out;
  out.reserve(ConvCode::coded_length(bits.size()));
  const Trellis& t = trellis();
  int s = 0;
  auto push = [&](int u) {
    const auto& o = t.out[static_cast<std::size_t>(2 * s + u)];
    out.push_back(o[0]);
    out.push_back(o[1]);
    s = Trellis::next_state(s, u);
  };
  for (std::uint8_t b : bits) push(b ? 1 : 0);
  for (int i = 0; i < ConvCode::kMemory; ++i) push(0);
  return out;
}

std::vector<std::uint8_t> soft_decode(std::span<const double> llrs) {
  std::vector<double> metric(llrs.size());
  std::transform(llrs.begin(), llrs.end(), metric.begin(), [](double x) { return 0.5 * x; });
  return viterbi(metric);
}

std::vector<std::uint8_t> hard_decode(std::span<const int> decisions) {
  std::vector<double> metric(decisions.size());
  std::transform(decisions.begin(), decisions.end(), metric.begin(),
                 [](int d) { return d > 0 ? 1.0 : -1.0; });
  return viterbi(metric);
}

}  // namespace monobit
