#include "monobit/experiment.hpp"

#include <numbers>

namespace monobit {

namespace {

std::vector<double> grid(double start, double stop, double step) {
  std::vector<double> out;
  for (double s = start; s <= stop + 1e-9; s += step) out.push_back(s);
  return out;
}

ExperimentConfig awgn_base(std::string name) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.channel_kind = ChannelKind::awgn;
  c.grid.symbol_samples = 32;
  c.grid.peak_index = 16;
  c.snr_grid = grid(0, 24, 1);
  c.stop_ber = 1e-5;
  return c;
}

ExperimentConfig multipath_base(std::string name, ChannelKind kind) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.channel_kind = kind;
  // 12.8 ns symbol window; the first arrival peaks 0.8 ns in.
  c.grid.symbol_samples = 128;
  c.grid.peak_index = 8;
  c.realizations = 100;
  c.snr_grid = grid(0, 24, 2);
  c.stop_ber = 1e-5;
  return c;
}

const std::vector<std::string> kBaseline = {"FR-F-MF", "MB-F-ML", "MB-F-MF", "MB-E-TE", "MB-E-TE-IR", "PQ-E-TE-IR"};
const std::vector<std::string> kImbalance = {"MB-F-MF",    "MB-F-MF-SI", "MB-E-TE-IR",
                                             "MB-E-DT-IR", "MB-E-CW-IR", "PQ-E-TE-IR"};

void apply_imbalance(ExperimentConfig& c) {
  c.imbalance.alpha = 0.1;
  c.imbalance.theta = 2.5 * std::numbers::pi / 180.0;
}

}  // namespace

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids = {"fig3_awgn", "fig4_dense",    "fig5_sparse",    "fig_phase",
                                               "fig_coded", "fig7_imb_awgn", "fig8_imb_dense", "fig9_imb_sparse"};
  return ids;
}

ExperimentConfig preset(const std::string& id) {
  if (id == "fig3_awgn") {
    ExperimentConfig c = awgn_base(id);
    c.receivers = kBaseline;
    return c;
  }
  if (id == "fig4_dense") {
    ExperimentConfig c = multipath_base(id, ChannelKind::dense);
    c.receivers = kBaseline;
    return c;
  }
  if (id == "fig5_sparse") {
    ExperimentConfig c = multipath_base(id, ChannelKind::sparse);
    c.receivers = kBaseline;
    return c;
  }
  if (id == "fig_phase") {
    ExperimentConfig c = awgn_base(id);
    c.receivers = {"MB-E-TE-IR", "PQ-E-TE-IR"};
    c.phase_mode = PhaseMode::fixed;
    c.fixed_phases_deg = {0.0, 45.0};
    return c;
  }
  if (id == "fig_coded") {
    ExperimentConfig c = awgn_base(id);
    c.receivers = {"MB-E-TE-IR"};
    c.coding = CodingKind::conv_r12;
    c.llr = {LlrKind::exact, LlrKind::maxlog, LlrKind::hard};
    c.snr_grid = grid(0, 20, 1);
    return c;
  }
  if (id == "fig7_imb_awgn") {
    ExperimentConfig c = awgn_base(id);
    c.receivers = kImbalance;
    apply_imbalance(c);
    c.snr_grid = grid(0, 40, 2);
    c.stop_ber = 0.0;  // the high-SNR floor and upturn are the point of this figure
    return c;
  }
  if (id == "fig8_imb_dense" || id == "fig9_imb_sparse") {
    ExperimentConfig c = multipath_base(id, id == "fig8_imb_dense" ? ChannelKind::dense : ChannelKind::sparse);
    c.receivers = kImbalance;
    apply_imbalance(c);
    return c;
  }
  throw Error(ErrorKind::UnknownPreset, "unknown preset '" + id + "'");
}

}  // namespace monobit
