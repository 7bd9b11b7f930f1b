#include "monobit/analytics.hpp"
#include "monobit/frontend.hpp"
#include "monobit/receivers.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <random>

using namespace monobit;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

ReferenceWaveform awgn_reference(double snr_db) {
  SamplingGrid g;
  g.symbol_samples = 32;
  g.peak_index = 16;
  return scale_to_snr(build_reference(PulseSpec{}, awgn_channel(), g), snr_db);
}

ReferenceWaveform from_vector(const oracle::Vector3& v) {
  ReferenceWaveform ref{Vector<double>(static_cast<Index>(v.p.size())), 1e-10};
  for (std::size_t l = 0; l < v.p.size(); ++l) ref.samples[static_cast<Index>(l)] = v.p[l];
  return ref;
}

ChipErrorProbs flat(Index n, double e) { return {Vector<double>::Constant(n, e), Vector<double>::Constant(n, e)}; }

ImbalancedChipErrorProbs flat_imb(Index n, double e) { return {flat(n, e), flat(n, e)}; }

}  // namespace

TEST_SUITE("analytics") {
  TEST_CASE("Q function") {
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(q_function(1.0) == doctest::Approx(0.158655).epsilon(1e-6));
    CHECK(q_function(3.0) == doctest::Approx(1.349898031630095e-3).epsilon(1e-10));
    CHECK(q_function(6.0) == doctest::Approx(9.865876450376946e-10).epsilon(1e-10));
    CHECK(q_function(8.0) == doctest::Approx(6.220960574271785e-16).epsilon(1e-10));
  }

  TEST_CASE("reports") {
    const auto r = make_report(4.0, "x");
    CHECK(r.predicted_ber == doctest::Approx(q_function(2.0)));
    CHECK(r.variant == "x");
    CHECK(make_report(0.0, "z").predicted_ber == 0.5);
  }

  TEST_CASE("optimal deflection") {
    CHECK(deflection_opt(flat(4, 0.5)).d_value == 0.0);
    CHECK(deflection_opt(flat(1, 0.25)).d_value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  TEST_CASE("optimal deflection matches the Monte Carlo statistic within 3 percent") {
    const auto v = oracle::deflection_vectors()[0];
    const auto mc = oracle::deflection_opt(v, 1'000'000, 101);
    const auto cf = deflection_opt(chip_error_probs(from_vector(v), PhaseDifference{v.phi}));
    CHECK(cf.d_value == doctest::Approx(mc.value()).epsilon(0.03));
  }

  TEST_CASE("suboptimal deflection") {
    CHECK(deflection_sub(flat(3, 0.5), 100).d_value == 0.0);
    CHECK_THROWS_AS(deflection_sub(flat(3, 0.2), 0.0), Error);
    const auto eps = chip_error_probs(awgn_reference(10.0), fixed_phase(30.0));
    const double d10 = deflection_sub(eps, 10).d_value;
    const double d100 = deflection_sub(eps, 100).d_value;
    const double d1000 = deflection_sub(eps, 1000).d_value;
    CHECK(d10 < d100);
    CHECK(d100 < d1000);
  }

  TEST_CASE("suboptimal deflection matches the Monte Carlo statistic") {
    for (const auto& v : oracle::deflection_vectors()) {
      const auto mc = oracle::deflection_sub(v, 20, 200'000, 202);
      const auto cf = deflection_sub(chip_error_probs(from_vector(v), PhaseDifference{v.phi}), 20);
      CHECK(cf.d_value == doctest::Approx(mc.value()).epsilon(0.05));
    }
  }

  TEST_CASE("Q(sqrt(D)) tracks one-shot training-based detection at 45 degrees") {
    const auto phi = fixed_phase(45.0);
    const std::vector<SymbolPair> train(100, SymbolPair{1, 1});
    IterationConfig one_shot{0, 0.0};
    std::mt19937_64 rng(3);
    int compared = 0;
    for (double snr = 4.0; snr <= 18.0; snr += 2.0) {
      const auto ref = awgn_reference(snr);
      double errors = 0, bits = 0;
      for (int b = 0; b < 100; ++b) {
        std::vector<SymbolPair> data(1000);
        for (auto& s : data) s = kHypotheses[rng() % 4];
        const auto frames = sample_symbol_stream(ref, data, phi, {}, 2 * b, SamplingMode::monobit);
        const auto t = sample_symbol_stream(ref, train, phi, {}, 2 * b + 1, SamplingMode::monobit);
        const auto res = iterative_demodulate(frames, t, one_shot);
        for (std::size_t k = 0; k < data.size(); ++k) {
          errors += (res.decisions[k].symbol.d0 != data[k].d0) + (res.decisions[k].symbol.d1 != data[k].d1);
        }
        bits += 2.0 * static_cast<double>(data.size());
      }
      const double ber = errors / bits;
      if (ber < 1e-4 || ber > 1e-1) continue;
      ++compared;
      const auto report = deflection_sub(chip_error_probs(ref, phi), 100);
      INFO("snr " << snr << " simulated " << ber << " Q(sqrt(D)) " << report.predicted_ber);
      CHECK(std::abs(std::log10(ber / report.predicted_ber)) <= 1.0);
      // Midpoint threshold between two equal-variance Gaussians.
      const double midpoint = q_function(std::sqrt(report.d_value) / 2);
      INFO("Q(sqrt(D)/2) " << midpoint);
      CHECK(std::abs(std::log10(ber / midpoint)) <= std::log10(3.0));
    }
    CHECK(compared >= 4);
  }

  TEST_CASE("equivalent training number") {
    CHECK(equivalent_training(100, 1000, 37, 0) == 100.0);
    CHECK(equivalent_training(100, 1000, 0, 1) == 1100.0);
    CHECK(equivalent_training(100, 1000, 100, 1) == doctest::Approx(1000.0 * 1000.0 / 1100.0).epsilon(1e-15));
    CHECK(equivalent_training(100, 1000, 100, 1) == doctest::Approx(909.09).epsilon(1e-5));
    CHECK_THROWS_AS(equivalent_training(0, 1000, 0, 1), Error);
    CHECK_THROWS_AS(equivalent_training(100, 1000, 1001, 1), Error);
  }

  TEST_CASE("double-training deflection") {
    CHECK(deflection_dt(flat_imb(5, 0.5), 50, 50).d_value == 0.0);
    const auto ref = awgn_reference(10.0);
    for (double deg = 0.0; deg <= 90.0; deg += 15.0) {
      const auto phi = fixed_phase(deg);
      const auto eps = chip_error_probs(ref, phi);
      const auto imb = chip_error_probs_imbalanced(ref, phi, 0.0);
      const double big = 1e12;
      CHECK(deflection_dt(imb, big, big).d_value <= deflection_sub(eps, big).d_value * (1 + 1e-9));
      CHECK(deflection_dt(imb, 50, 50).d_value <= deflection_sub(eps, 100).d_value);
    }
  }

  TEST_CASE("double-training and combinational deflections match their Monte Carlo statistics") {
    for (const auto& v : oracle::deflection_vectors()) {
      const auto ref = from_vector(v);
      const auto imb = chip_error_probs_imbalanced(ref, PhaseDifference{v.phi}, v.theta);
      const auto [a, b] = true_sign_factors(PhaseDifference{v.phi}, v.theta);
      const auto dt_mc = oracle::deflection_dt(v, 25, 200'000, 303);
      CHECK(deflection_dt(imb, 25, 25).d_value == doctest::Approx(dt_mc.value()).epsilon(0.05));
      const auto cw_mc = oracle::deflection_cw(v, a, b, 25, 25, 200'000, 404);
      CHECK(deflection_cw(imb, a, b, 25, 25).d_value == doctest::Approx(cw_mc.value()).epsilon(0.05));
    }
  }

  TEST_CASE("combinational deflection exceeds double-training deflection") {
    CHECK(deflection_cw(flat_imb(5, 0.5), 1, -1, 50, 50).d_value == 0.0);
    const auto base = awgn_reference(0.0);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> phi_u(0.0, 360.0), theta_u(0.5, 5.0), snr_u(0.0, 20.0);
    int wins = 0;
    for (int t = 0; t < 100; ++t) {
      const auto phi = fixed_phase(phi_u(rng));
      const double theta = theta_u(rng) * kDeg;
      const auto ref = scale_to_snr(base, snr_u(rng));
      const auto imb = chip_error_probs_imbalanced(ref, phi, theta);
      const auto [a, b] = true_sign_factors(phi, theta);
      wins += deflection_cw(imb, a, b, 50, 50).d_value > deflection_dt(imb, 50, 50).d_value;
    }
    CHECK(wins == 100);
  }

  TEST_CASE("deflection sweep") {
    SweepSpec spec;
    for (int d = 0; d <= 90; d += 5) spec.phi_deg.push_back(d);
    const auto rows = deflection_sweep(awgn_reference(0.0), spec);
    CHECK(rows.size() == spec.phi_deg.size() * 4);
    double best = -1.0, best_phi = -1.0, d0 = 0.0, d90 = 0.0;
    for (const auto& r : rows) {
      if (r.variant != "sub") continue;
      if (r.d_value > best) {
        best = r.d_value;
        best_phi = r.phi_deg;
      }
      if (r.phi_deg == 0.0) d0 = r.d_value;
      if (r.phi_deg == 90.0) d90 = r.d_value;
    }
    CHECK(best_phi == 45.0);
    CHECK(std::abs(d0 - d90) <= 1e-9);

    const std::string csv = format_sweep_csv(rows);
    CHECK(csv.rfind("phi_deg,theta_deg,snr_db,variant,d,predicted_ber\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size() + 1));
    try {
      write_sweep_csv(rows, std::filesystem::path("/nonexistent-dir/x/sweep.csv"));
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IoError);
    }
  }
}
