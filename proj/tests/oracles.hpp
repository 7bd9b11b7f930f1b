#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls into the receivers or analytics
// modules; probabilities are rebuilt from the physical signal model.

#include "monobit/core.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double tail(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

/// Noiseless baseband value of sample amplitude p for symbol s at phase phi,
/// after a phase-only imbalance theta (alpha = 0 keeps unit noise variance).
inline std::complex<double> noiseless(double p, monobit::SymbolPair s, double phi, double theta = 0.0) {
  double g = 0.0;
  if (s.d1 > 0 && s.d0 < 0) g = std::numbers::pi / 2;
  if (s.d1 < 0 && s.d0 > 0) g = -std::numbers::pi / 2;
  if (s.d1 < 0 && s.d0 < 0) g = std::numbers::pi;
  const double x = p * std::cos(g - phi);
  const double y = p * std::sin(g - phi);
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  return {c * x + sn * y, c * y + sn * x};
}

/// P(sign bit = +1) for a noiseless branch value v with unit-variance noise.
inline double p_plus(double v) { return 1.0 - tail(v); }

/// Probability of an observed monobit frame (entries +-1) under hypothesis s.
inline double frame_probability(const std::vector<double>& p, double phi, monobit::SymbolPair s,
                                const std::vector<int>& r_i, const std::vector<int>& r_q) {
  double prob = 1.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    const auto v = noiseless(p[l], s, phi);
    const double pi = p_plus(v.real()), pq = p_plus(v.imag());
    prob *= (r_i[l] > 0 ? pi : 1.0 - pi) * (r_q[l] > 0 ? pq : 1.0 - pq);
  }
  return prob;
}

/// Two-class deflection: squared gap of the class means over the average of
/// the two class variances.
struct Deflection {
  double gap = 0.0;
  double var = 0.0;
  double value() const { return gap * gap / var; }
};

class Moments {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  double mean() const { return mean_; }
  double variance() const { return m2_ / static_cast<double>(n_ - 1); }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0;
};

struct Vector3 {
  std::vector<double> p;
  double phi = 0.0;
  double theta = 0.0;
};

/// Monte Carlo engine: draws a physical frame of class `cls` and hands it to
/// `statistic(rng, r_i, r_q)`, which may draw its own training randomness.
template <typename Statistic>
Deflection simulate(const Vector3& v, monobit::SymbolPair class_a, monobit::SymbolPair class_b, std::uint64_t trials,
                    std::uint64_t seed, Statistic statistic) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  const std::size_t n = v.p.size();
  std::vector<int> r_i(n), r_q(n);
  Moments ma, mb;
  const double c = std::cos(v.theta / 2), sn = std::sin(v.theta / 2);
  for (int which = 0; which < 2; ++which) {
    const monobit::SymbolPair cls = which == 0 ? class_a : class_b;
    Moments& m = which == 0 ? ma : mb;
    std::vector<std::complex<double>> clean(n);
    for (std::size_t l = 0; l < n; ++l) clean[l] = noiseless(v.p[l], cls, v.phi, 0.0);
    for (std::uint64_t t = 0; t < trials; ++t) {
      for (std::size_t l = 0; l < n; ++l) {
        const double x = clean[l].real() + gauss(rng);
        const double y = clean[l].imag() + gauss(rng);
        r_i[l] = c * x + sn * y > 0 ? 1 : -1;
        r_q[l] = c * y + sn * x > 0 ? 1 : -1;
      }
      m.add(statistic(rng, r_i, r_q));
    }
  }
  return Deflection{ma.mean() - mb.mean(), 0.5 * (ma.variance() + mb.variance())};
}

/// Weight estimate from n_t training bits with P(+1) = q: 2 * Binomial / n_t - 1.
inline double trained_weight(std::mt19937_64& rng, int n_t, double q) {
  std::binomial_distribution<int> b(n_t, q);
  return 2.0 * b(rng) / n_t - 1.0;
}

/// Exact ML statistic Lambda(1,1) with full CSI.
inline Deflection deflection_opt(const Vector3& v, std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = v.p.size();
  std::vector<double> li(n), lq(n);
  for (std::size_t l = 0; l < n; ++l) {
    const auto s = noiseless(v.p[l], {1, 1}, v.phi);
    li[l] = std::log(p_plus(s.real()) / (1.0 - p_plus(s.real())));
    lq[l] = std::log(p_plus(s.imag()) / (1.0 - p_plus(s.imag())));
  }
  Vector3 plain = v;
  plain.theta = 0.0;
  return simulate(plain, {1, 1}, {1, -1}, trials, seed,
                  [&](std::mt19937_64&, const std::vector<int>& r_i, const std::vector<int>& r_q) {
                    double lam = 0.0;
                    for (std::size_t l = 0; l < n; ++l) lam += 0.5 * (r_i[l] * li[l] + r_q[l] * lq[l]);
                    return lam;
                  });
}

/// Linear combiner with weights trained on n_t fresh (1,1) frames per trial.
inline Deflection deflection_sub(const Vector3& v, int n_t, std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = v.p.size();
  std::vector<double> qi(n), qq(n);
  for (std::size_t l = 0; l < n; ++l) {
    const auto s = noiseless(v.p[l], {1, 1}, v.phi);
    qi[l] = p_plus(s.real());
    qq[l] = p_plus(s.imag());
  }
  Vector3 plain = v;
  plain.theta = 0.0;
  return simulate(plain, {1, 1}, {1, -1}, trials, seed,
                  [&](std::mt19937_64& rng, const std::vector<int>& r_i, const std::vector<int>& r_q) {
                    double lam = 0.0;
                    for (std::size_t l = 0; l < n; ++l) {
                      lam += trained_weight(rng, n_t, qi[l]) * r_i[l] + trained_weight(rng, n_t, qq[l]) * r_q[l];
                    }
                    return lam;
                  });
}

/// Imbalanced training probabilities: zero = (1,1), one = (1,-1).
struct TrainingProbs {
  std::vector<double> i0, q0, i1, q1;
};

inline TrainingProbs training_probs(const Vector3& v) {
  TrainingProbs t;
  for (double p : v.p) {
    const auto z = noiseless(p, {1, 1}, v.phi, v.theta);
    const auto o = noiseless(p, {1, -1}, v.phi, v.theta);
    t.i0.push_back(p_plus(z.real()));
    t.q0.push_back(p_plus(z.imag()));
    t.i1.push_back(p_plus(o.real()));
    t.q1.push_back(p_plus(o.imag()));
  }
  return t;
}

/// Double-training statistic Lambda_d(1,1) = w^0 . r, classes (1,1) vs (1,-1).
inline Deflection deflection_dt(const Vector3& v, int n_t0, std::uint64_t trials, std::uint64_t seed) {
  const TrainingProbs t = training_probs(v);
  return simulate(v, {1, 1}, {1, -1}, trials, seed,
                  [&](std::mt19937_64& rng, const std::vector<int>& r_i, const std::vector<int>& r_q) {
                    double lam = 0.0;
                    for (std::size_t l = 0; l < r_i.size(); ++l) {
                      lam += trained_weight(rng, n_t0, t.i0[l]) * r_i[l] + trained_weight(rng, n_t0, t.q0[l]) * r_q[l];
                    }
                    return lam;
                  });
}

/// Combinational-weight statistic Lambda_cw(1,1), classes (1,1) vs (-1,1).
inline Deflection deflection_cw(const Vector3& v, int a, int b, int n_t0, int n_t1, std::uint64_t trials,
                                std::uint64_t seed) {
  const TrainingProbs t = training_probs(v);
  return simulate(v, {1, 1}, {-1, 1}, trials, seed,
                  [&](std::mt19937_64& rng, const std::vector<int>& r_i, const std::vector<int>& r_q) {
                    double lam = 0.0;
                    for (std::size_t l = 0; l < r_i.size(); ++l) {
                      const double wi0 = trained_weight(rng, n_t0, t.i0[l]);
                      const double wq0 = trained_weight(rng, n_t0, t.q0[l]);
                      const double wi1 = trained_weight(rng, n_t1, t.i1[l]);
                      const double wq1 = trained_weight(rng, n_t1, t.q1[l]);
                      lam += (0.5 * wi0 + 0.5 * a * wq1) * r_i[l] + (0.5 * wq0 + 0.5 * b * wi1) * r_q[l];
                    }
                    return lam;
                  });
}

/// The three fixed test vectors used for the deflection oracles.
inline std::vector<Vector3> deflection_vectors() {
  const double deg = std::numbers::pi / 180.0;
  return {
      {{0.4, 1.1, 2.0, 1.3, -0.6}, 20.0 * deg, 2.5 * deg},
      {{0.8, -1.5, 2.5, 0.3}, 45.0 * deg, 5.0 * deg},
      {{1.2, 0.9, -0.7, 1.8, 0.5, -0.2}, 70.0 * deg, 1.0 * deg},
  };
}

/// SNR (dB) where a BER curve crosses `target`, interpolating log10(BER)
/// linearly between grid points. NaN if the curve never crosses.
inline double crossing_db(const std::vector<double>& snr, const std::vector<double>& ber, double target) {
  for (std::size_t k = 1; k < snr.size(); ++k) {
    if (ber[k - 1] >= target && ber[k] < target) {
      if (ber[k] <= 0.0) return snr[k];
      const double y0 = std::log10(ber[k - 1]), y1 = std::log10(ber[k]), yt = std::log10(target);
      return snr[k - 1] + (yt - y0) / (y1 - y0) * (snr[k] - snr[k - 1]);
    }
  }
  return std::nan("");
}

}  // namespace oracle
