#pragma once

#include "monobit/channel.hpp"
#include "monobit/frontend.hpp"
#include "monobit/receivers.hpp"
#include "monobit/waveform.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace monobit {

enum class ChannelKind { awgn, dense, sparse, file };
enum class PhaseMode { random, fixed };
enum class CodingKind { none, conv_r12 };
enum class LlrKind { exact, maxlog, hard };

const char* to_string(ChannelKind k);
const char* to_string(LlrKind k);

struct ExperimentConfig {
  std::string name = "custom";
  std::vector<std::string> receivers;  // registry ids, one curve each
  ChannelKind channel_kind = ChannelKind::awgn;
  std::string channel_file;  // ChannelKind::file
  std::vector<double> snr_grid;  // E_b/N_0 in dB
  int n_training = 100;
  int n_data = 1000;
  ImbalanceParams imbalance;  // theta in radians
  PhaseMode phase_mode = PhaseMode::random;
  std::vector<double> fixed_phases_deg;  // PhaseMode::fixed, one curve per entry
  CodingKind coding = CodingKind::none;
  std::vector<LlrKind> llr{LlrKind::exact};  // coded runs, one curve per entry
  std::uint64_t master_seed = 1;
  std::uint64_t min_bit_errors = 200;
  std::uint64_t max_bits = 2'000'000;
  int realizations = 100;  // multipath only
  /// Remaining SNR points of a curve are skipped once its BER drops below
  /// this value; 0 disables the cutoff.
  double stop_ber = 0.0;
  IterationConfig iteration;
  PulseSpec pulse;
  SamplingGrid grid;
  DenseProfile dense;
  SparseProfile sparse;
  int threads = 0;  // 0 selects the hardware concurrency

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

struct BerRecord {
  double snr_db = 0.0;
  std::uint64_t bits_sent = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
  std::string receiver_id;  // curve label, e.g. "MB-E-TE-IR-45" or "MB-E-TE-IR-LLR-Sub"
  std::string channel_kind;
  std::uint64_t seed = 0;

  friend bool operator==(const BerRecord&, const BerRecord&) = default;
};

/// Known preset ids in a fixed order.
const std::vector<std::string>& preset_ids();
/// Throws UnknownPreset.
ExperimentConfig preset(const std::string& figure_id);

/// Flat `key = value` text; '#' starts a comment. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string format_config(const ExperimentConfig& config);

/// Channel realizations used by the experiment; a single entry for AWGN and
/// file channels.
std::vector<ChannelRealization> experiment_channels(const ExperimentConfig& config);

std::vector<BerRecord> run_experiment(const ExperimentConfig& config);

std::string format_results(const std::vector<BerRecord>& records);
void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path);
std::vector<BerRecord> parse_results(const std::string& csv);
std::vector<BerRecord> read_results(const std::filesystem::path& path);
/// Standalone matplotlib script plotting every curve of `csv_path`.
std::string plot_script(const std::vector<BerRecord>& records, const std::filesystem::path& csv_path);
void emit_plot_script(const std::vector<BerRecord>& records, const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path);

}  // namespace monobit
