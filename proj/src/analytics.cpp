#include "monobit/analytics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace monobit {

namespace {

Eigen::ArrayXd m_of(const Vector<double>& eps) { return (1.0 - 2.0 * eps.array()).square(); }
Eigen::ArrayXd v_of(const Vector<double>& eps) { return eps.array() * (1.0 - eps.array()); }
Eigen::ArrayXd w_of(const Vector<double>& eps) { return 1.0 - 2.0 * eps.array(); }

double safe_ratio(double num, double den) { return (num == 0.0 || !(den > 0.0)) ? 0.0 : num / den; }

ChipErrorProbs clamped(const ChipErrorProbs& eps) {
  return ChipErrorProbs{eps.i.unaryExpr(&clamp_epsilon), eps.q.unaryExpr(&clamp_epsilon)};
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

DeflectionReport make_report(double d, std::string variant) {
  d = std::max(d, 0.0);
  return DeflectionReport{d, q_function(std::sqrt(d)), std::move(variant)};
}

DeflectionReport deflection_opt(const ChipErrorProbs& raw) {
  const ChipErrorProbs eps = clamped(raw);
  const Eigen::ArrayXd ei = eps.i.array();
  const Eigen::ArrayXd eq = eps.q.array();
  const Eigen::ArrayXd li = ((1.0 - ei) / ei).log();
  const Eigen::ArrayXd lq = ((1.0 - eq) / eq).log();
  const double num = ((1.0 - ei - eq) * li + (ei - eq) * lq).sum();
  const double den = ((v_of(eps.i) + v_of(eps.q)) * (li.square() + lq.square())).sum();
  return make_report(2.0 * safe_ratio(num * num, den), "opt");
}

DeflectionReport deflection_sub(const ChipErrorProbs& raw, double n_t_eq) {
  if (!(n_t_eq > 0.0)) throw Error(ErrorKind::InvalidArgument, "n_t_eq must be positive");
  const ChipErrorProbs eps = clamped(raw);
  const Eigen::ArrayXd m = m_of(eps.i) + m_of(eps.q);
  const Eigen::ArrayXd v = v_of(eps.i) + v_of(eps.q);
  const double num = m.sum();
  const double den = (m + 4.0 * v / n_t_eq - 0.5 * m.square()).sum();
  return make_report(safe_ratio(num * num, den), "sub");
}

double equivalent_training(int n_t, int n_d, int n_err_prev, int iteration) {
  if (n_t < 1 || n_d < 0 || n_err_prev < 0 || n_err_prev > n_d || iteration < 0) {
    throw Error(ErrorKind::InvalidArgument, "equivalent_training requires n_t >= 1 and 0 <= n_err <= n_d");
  }
  if (iteration == 0) return n_t;
  const double total = static_cast<double>(n_t) + n_d;
  const double correct = total - n_err_prev;
  return correct * correct / total;
}

DeflectionReport deflection_dt(const ImbalancedChipErrorProbs& raw, double n_t0, double /*n_t1*/) {
  if (!(n_t0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "training counts must be positive");
  const ChipErrorProbs e0 = clamped(raw.zero);
  const ChipErrorProbs e1 = clamped(raw.one);
  const Eigen::ArrayXd wi0 = w_of(e0.i), wq0 = w_of(e0.q), wi1 = w_of(e1.i), wq1 = w_of(e1.q);
  const double gap = (wi0 * (e1.i.array() - e0.i.array()) + wq0 * (e1.q.array() - e0.q.array())).sum();
  const double var = (4.0 * (v_of(e0.i) + v_of(e0.q)) / n_t0 + wi0.square() + wq0.square() -
                      0.5 * (wi0.pow(4) + (wi0 * wi1).square() + wq0.pow(4) + (wq0 * wq1).square()))
                         .sum();
  return make_report(safe_ratio(4.0 * gap * gap, var), "dt");
}

DeflectionReport deflection_cw(const ImbalancedChipErrorProbs& raw, int a, int b, double n_t0, double n_t1) {
  if (!(n_t0 > 0.0) || !(n_t1 > 0.0)) throw Error(ErrorKind::InvalidArgument, "training counts must be positive");
  const ChipErrorProbs e0 = clamped(raw.zero);
  const ChipErrorProbs e1 = clamped(raw.one);
  const Eigen::ArrayXd wi0 = w_of(e0.i), wq0 = w_of(e0.q), wi1 = w_of(e1.i), wq1 = w_of(e1.q);
  const Eigen::ArrayXd vi0 = v_of(e0.i), vq0 = v_of(e0.q), vi1 = v_of(e1.i), vq1 = v_of(e1.q);
  const double num = (wi0.square() + wq0.square() + (a + b) * wi1 * wq1 + a * wi0 * wq1 + b * wi1 * wq0 +
                      wi0 * wi1 + wq0 * wq1)
                         .sum();
  const double den = ((vi0 + vq0) / n_t0 + (vi1 + vq1) / n_t1 + 0.5 * (wi0 + a * wq1).square() * (vi0 + vi1) +
                      0.5 * (wq0 + b * wi1).square() * (vq0 + vq1))
                         .sum();
  // The mean gap of the statistic is half the summed numerator terms.
  const double gap = 0.5 * num;
  return make_report(safe_ratio(gap * gap, den), "cw");
}

std::vector<SweepRow> deflection_sweep(const ReferenceWaveform& ref, const SweepSpec& spec) {
  std::vector<SweepRow> rows;
  for (double theta_deg : spec.theta_deg) {
    const double theta = theta_deg * std::numbers::pi / 180.0;
    for (double snr : spec.snr_db) {
      const ReferenceWaveform scaled = scale_to_snr(ref, snr);
      for (double phi_deg : spec.phi_deg) {
        const PhaseDifference phi = fixed_phase(phi_deg);
        const ChipErrorProbs eps = chip_error_probs(scaled, phi);
        const ImbalancedChipErrorProbs eps_imb = chip_error_probs_imbalanced(scaled, phi, theta);
        const auto [a, b] = true_sign_factors(phi, theta);
        for (const DeflectionReport& r :
             {deflection_opt(eps), deflection_sub(eps, spec.n_t), deflection_dt(eps_imb, spec.n_t / 2, spec.n_t / 2),
              deflection_cw(eps_imb, a, b, spec.n_t / 2, spec.n_t / 2)}) {
          rows.push_back(SweepRow{phi_deg, theta_deg, snr, r.variant, r.d_value, r.predicted_ber});
        }
      }
    }
  }
  return rows;
}

std::string format_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "phi_deg,theta_deg,snr_db,variant,d,predicted_ber\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%s,%.17g,%.17g\n", r.phi_deg, r.theta_deg, r.snr_db,
                  r.variant.c_str(), r.d_value, r.predicted_ber);
    out += buf;
  }
  return out;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  os << format_sweep_csv(rows);
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace monobit
