#pragma once

#include "monobit/core.hpp"
#include "monobit/receivers.hpp"
#include "monobit/waveform.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace monobit {

/// Gaussian tail probability Q(x) = erfc(x / sqrt 2) / 2.
double q_function(double x);

struct DeflectionReport {
  double d_value = 0.0;
  double predicted_ber = 0.5;  // Q(sqrt(d_value))
  std::string variant;
};

DeflectionReport make_report(double d, std::string variant);

/// Deflection of the exact monobit ML statistic.
DeflectionReport deflection_opt(const ChipErrorProbs& eps);
/// Deflection of the linear combiner with weights trained on n_t_eq symbols.
DeflectionReport deflection_sub(const ChipErrorProbs& eps, double n_t_eq);
/// Effective training length after `iteration` refinement passes with
/// n_err_prev decision errors in the previous pass.
double equivalent_training(int n_t, int n_d, int n_err_prev, int iteration);
/// Double-training combiner with n_t0 / n_t1 frames per sequence.
DeflectionReport deflection_dt(const ImbalancedChipErrorProbs& eps, double n_t0, double n_t1);
/// Combinational-weight combiner with sign factors a, b.
DeflectionReport deflection_cw(const ImbalancedChipErrorProbs& eps, int a, int b, double n_t0, double n_t1);

struct SweepRow {
  double phi_deg = 0.0;
  double theta_deg = 0.0;
  double snr_db = 0.0;
  std::string variant;
  double d_value = 0.0;
  double predicted_ber = 0.0;
};

struct SweepSpec {
  std::vector<double> phi_deg;
  std::vector<double> theta_deg{0.0};
  std::vector<double> snr_db{10.0};
  double n_t = 100.0;
};

/// Every deflection variant over the (theta, snr, phi) grid for one reference
/// waveform. The ref is rescaled to each SNR point.
std::vector<SweepRow> deflection_sweep(const ReferenceWaveform& ref, const SweepSpec& spec);

/// CSV with header phi_deg,theta_deg,snr_db,variant,d,predicted_ber.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);
std::string format_sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace monobit
