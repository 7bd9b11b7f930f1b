// Command-line front end for the BER simulator and the deflection analytics.
#include "monobit/analytics.hpp"
#include "monobit/experiment.hpp"
#include "monobit/registry.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monobit QPSK receiver simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a BER experiment");
  std::string preset_id, config_path, out_path = "results.csv", plot_path;
  std::uint64_t seed = 0;
  int threads = 0;
  bool print_config = false;
  auto* preset_opt = run->add_option("--preset", preset_id, "figure preset id");
  auto* config_opt = run->add_option("--config", config_path, "key = value config file");
  preset_opt->excludes(config_opt);
  auto* seed_opt = run->add_option("--seed", seed, "master seed override");
  run->add_option("--out", out_path, "CSV output path");
  run->add_option("--plot", plot_path, "also write a matplotlib script here");
  run->add_option("--threads", threads, "worker threads (0 = all cores)");
  run->add_flag("--print-config", print_config, "print the resolved config and exit");

  auto* analyze = app.add_subcommand("analyze", "closed-form deflection ratios");
  bool deflection = false, phi_sweep = false;
  double snr_db = 10.0, theta_deg = 0.0, n_t = 100.0;
  std::string sweep_out;
  analyze->add_flag("--deflection", deflection, "evaluate deflection ratios");
  analyze->add_flag("--phi-sweep", phi_sweep, "sweep phi over 0..90 degrees in 5 degree steps");
  analyze->add_option("--snr", snr_db, "Eb/N0 in dB");
  analyze->add_option("--theta", theta_deg, "phase imbalance in degrees");
  analyze->add_option("--n-training", n_t, "training length");
  analyze->add_option("--out", sweep_out, "CSV output path (default stdout)");

  auto* list = app.add_subcommand("list-receivers", "print the receiver registry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*list) {
      for (const auto& rx : monobit::receiver_registry()) std::printf("%-12s %s\n", rx.id.c_str(), rx.description.c_str());
      return kOk;
    }

    if (*analyze) {
      if (!deflection) {
        std::fprintf(stderr, "analyze: nothing to do (pass --deflection)\n");
        return kConfigError;
      }
      monobit::SweepSpec spec;
      spec.phi_deg = phi_sweep ? std::vector<double>{} : std::vector<double>{45.0};
      if (phi_sweep) {
        for (int d = 0; d <= 90; d += 5) spec.phi_deg.push_back(d);
      }
      spec.theta_deg = {theta_deg};
      spec.snr_db = {snr_db};
      spec.n_t = n_t;
      monobit::SamplingGrid grid;
      grid.symbol_samples = 32;
      grid.peak_index = 16;
      const auto ref = monobit::build_reference({}, monobit::awgn_channel(), grid);
      const auto rows = monobit::deflection_sweep(ref, spec);
      if (sweep_out.empty()) {
        std::fputs(monobit::format_sweep_csv(rows).c_str(), stdout);
      } else {
        monobit::write_sweep_csv(rows, sweep_out);
      }
      return kOk;
    }

    monobit::ExperimentConfig cfg;
    try {
      if (!preset_id.empty()) {
        cfg = monobit::preset(preset_id);
      } else if (!config_path.empty()) {
        cfg = monobit::load_config(config_path);
      } else {
        std::fprintf(stderr, "run: pass --preset or --config\n");
        return kConfigError;
      }
      if (*seed_opt) cfg.master_seed = seed;
      if (threads > 0) cfg.threads = threads;
      cfg.validate();
    } catch (const monobit::Error& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return kConfigError;
    }
    if (print_config) {
      std::fputs(monobit::format_config(cfg).c_str(), stdout);
      return kOk;
    }
    const auto records = monobit::run_experiment(cfg);
    monobit::write_results(records, out_path);
    if (!plot_path.empty()) monobit::emit_plot_script(records, out_path, plot_path);
    std::fprintf(stderr, "wrote %zu records to %s\n", records.size(), out_path.c_str());
    return kOk;
  } catch (const monobit::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const auto k = e.kind();
    return (k == monobit::ErrorKind::ConfigError || k == monobit::ErrorKind::UnknownPreset) ? kConfigError
                                                                                           : kRuntimeError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kRuntimeError;
  }
}
