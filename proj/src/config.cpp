#include "monobit/experiment.hpp"

#include "monobit/registry.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace monobit {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(value);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail("invalid number for '" + key + "': '" + text + "'");
  return value;
}

std::vector<double> parse_grid(const std::string& key, const std::string& value) {
  // Either a comma list or start:stop:step with an inclusive stop.
  if (value.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::istringstream is(value);
    for (std::string p; std::getline(is, p, ':');) parts.push_back(trim(p));
    if (parts.size() != 3) fail("range for '" + key + "' must be start:stop:step");
    const double start = parse_number<double>(key, parts[0]);
    const double stop = parse_number<double>(key, parts[1]);
    const double step = parse_number<double>(key, parts[2]);
    if (!(step > 0.0) || stop < start) fail("range for '" + key + "' must be increasing");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
  }
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_number<double>(key, item));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", v[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

void ExperimentConfig::validate() const {
  if (receivers.empty()) fail("no receiver given");
  for (const auto& id : receivers) {
    const ReceiverInfo& rx = find_receiver(id);
    if (rx.training == TrainingLayout::dual && n_training < 2) fail(id + " needs at least two training symbols");
  }
  if (snr_grid.empty()) fail("snr_grid is empty");
  for (double s : snr_grid) {
    if (!std::isfinite(s)) fail("snr_grid holds a non-finite value");
  }
  if (n_training < 1) fail("n_training must be at least 1");
  if (n_data < 1) fail("n_data must be at least 1");
  if (!(std::abs(imbalance.alpha) < 1.0) || !(std::abs(imbalance.theta) < std::numbers::pi / 2)) {
    fail("imbalance requires |alpha| < 1 and |theta| < 90 degrees");
  }
  if (phase_mode == PhaseMode::fixed && fixed_phases_deg.empty()) fail("fixed phase mode needs fixed_phases_deg");
  if (channel_kind == ChannelKind::file && channel_file.empty()) fail("file channel needs channel_file");
  if (realizations < 1) fail("realizations must be at least 1");
  if (min_bit_errors < 1 || max_bits < 1) fail("stopping rule needs min_bit_errors >= 1 and max_bits >= 1");
  if (coding == CodingKind::conv_r12) {
    if (llr.empty()) fail("coded runs need at least one llr kind");
    if (2 * n_data <= 6) fail("coded runs need n_data > 3");
  }
  if (iteration.max_iter < 0 || !(iteration.threshold_frac >= 0.0 && iteration.threshold_frac < 1.0)) {
    fail("max_iter must be >= 0 and threshold_frac in [0, 1)");
  }
  if (stop_ber < 0.0) fail("stop_ber must be nonnegative");
  if (threads < 0) fail("threads must be nonnegative");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, std::string> seen;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!seen.emplace(key, value).second) fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

    if (key == "name") c.name = value;
    else if (key == "receivers" || key == "receiver_id") c.receivers = split_list(value);
    else if (key == "channel") {
      if (value == "awgn") c.channel_kind = ChannelKind::awgn;
      else if (value == "dense") c.channel_kind = ChannelKind::dense;
      else if (value == "sparse") c.channel_kind = ChannelKind::sparse;
      else if (value == "file") c.channel_kind = ChannelKind::file;
      else fail("unknown channel '" + value + "'");
    }
    else if (key == "channel_file") c.channel_file = value;
    else if (key == "snr_grid") c.snr_grid = parse_grid(key, value);
    else if (key == "n_training") c.n_training = parse_number<int>(key, value);
    else if (key == "n_data") c.n_data = parse_number<int>(key, value);
    else if (key == "alpha") c.imbalance.alpha = parse_number<double>(key, value);
    else if (key == "theta_deg") c.imbalance.theta = parse_number<double>(key, value) * kDeg;
    else if (key == "phase") {
      if (value == "random") c.phase_mode = PhaseMode::random;
      else if (value == "fixed") c.phase_mode = PhaseMode::fixed;
      else fail("phase must be random or fixed");
    }
    else if (key == "fixed_phases_deg") c.fixed_phases_deg = parse_grid(key, value);
    else if (key == "coding") {
      if (value == "none") c.coding = CodingKind::none;
      else if (value == "conv_r12") c.coding = CodingKind::conv_r12;
      else fail("coding must be none or conv_r12");
    }
    else if (key == "llr") {
      c.llr.clear();
      for (const auto& item : split_list(value)) {
        if (item == "exact") c.llr.push_back(LlrKind::exact);
        else if (item == "maxlog") c.llr.push_back(LlrKind::maxlog);
        else if (item == "hard") c.llr.push_back(LlrKind::hard);
        else fail("unknown llr kind '" + item + "'");
      }
    }
    else if (key == "master_seed") c.master_seed = parse_number<std::uint64_t>(key, value);
    else if (key == "min_bit_errors") c.min_bit_errors = parse_number<std::uint64_t>(key, value);
    else if (key == "max_bits") c.max_bits = static_cast<std::uint64_t>(parse_number<double>(key, value));
    else if (key == "realizations") c.realizations = parse_number<int>(key, value);
    else if (key == "stop_ber") c.stop_ber = parse_number<double>(key, value);
    else if (key == "max_iter") c.iteration.max_iter = parse_number<int>(key, value);
    else if (key == "threshold_frac") c.iteration.threshold_frac = parse_number<double>(key, value);
    else if (key == "tau_ns") c.pulse.tau = parse_number<double>(key, value) * 1e-9;
    else if (key == "beta") c.pulse.beta = parse_number<double>(key, value);
    else if (key == "oversample") c.pulse.oversample = parse_number<int>(key, value);
    else if (key == "bandwidth_ghz") c.grid.bandwidth = parse_number<double>(key, value) * 1e9;
    else if (key == "symbol_samples") c.grid.symbol_samples = parse_number<int>(key, value);
    else if (key == "peak_index") c.grid.peak_index = parse_number<int>(key, value);
    else if (key == "dense_decay_ns") c.dense.decay_ns = parse_number<double>(key, value);
    else if (key == "dense_num_taps") c.dense.num_taps = parse_number<int>(key, value);
    else if (key == "dense_spacing_ns") c.dense.spacing_ns = parse_number<double>(key, value);
    else if (key == "sparse_clusters") c.sparse.num_clusters = parse_number<int>(key, value);
    else if (key == "sparse_span_ns") c.sparse.cluster_span_ns = parse_number<double>(key, value);
    else if (key == "sparse_ray_rate") c.sparse.ray_rate = parse_number<double>(key, value);
    else if (key == "threads") c.threads = parse_number<int>(key, value);
    else fail("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::ConfigError, "cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream os;
  std::string rx;
  for (std::size_t i = 0; i < c.receivers.size(); ++i) rx += (i ? "," : "") + c.receivers[i];
  std::string llr;
  for (std::size_t i = 0; i < c.llr.size(); ++i) llr += std::string(i ? "," : "") + to_string(c.llr[i]);
  os << "name = " << c.name << '\n'
     << "receivers = " << rx << '\n'
     << "channel = " << to_string(c.channel_kind) << '\n';
  if (!c.channel_file.empty()) os << "channel_file = " << c.channel_file << '\n';
  os << "snr_grid = " << join(c.snr_grid) << '\n'
     << "n_training = " << c.n_training << '\n'
     << "n_data = " << c.n_data << '\n'
     << "alpha = " << num(c.imbalance.alpha) << '\n'
     << "theta_deg = " << num(c.imbalance.theta / kDeg) << '\n'
     << "phase = " << (c.phase_mode == PhaseMode::fixed ? "fixed" : "random") << '\n';
  if (!c.fixed_phases_deg.empty()) os << "fixed_phases_deg = " << join(c.fixed_phases_deg) << '\n';
  os << "coding = " << (c.coding == CodingKind::conv_r12 ? "conv_r12" : "none") << '\n'
     << "llr = " << llr << '\n'
     << "master_seed = " << c.master_seed << '\n'
     << "min_bit_errors = " << c.min_bit_errors << '\n'
     << "max_bits = " << c.max_bits << '\n'
     << "realizations = " << c.realizations << '\n'
     << "stop_ber = " << num(c.stop_ber) << '\n'
     << "max_iter = " << c.iteration.max_iter << '\n'
     << "threshold_frac = " << num(c.iteration.threshold_frac) << '\n'
     << "tau_ns = " << num(c.pulse.tau * 1e9) << '\n'
     << "beta = " << num(c.pulse.beta) << '\n'
     << "oversample = " << c.pulse.oversample << '\n'
     << "bandwidth_ghz = " << num(c.grid.bandwidth / 1e9) << '\n'
     << "symbol_samples = " << c.grid.symbol_samples << '\n'
     << "peak_index = " << c.grid.peak_index << '\n'
     << "dense_decay_ns = " << num(c.dense.decay_ns) << '\n'
     << "dense_num_taps = " << c.dense.num_taps << '\n'
     << "dense_spacing_ns = " << num(c.dense.spacing_ns) << '\n'
     << "sparse_clusters = " << c.sparse.num_clusters << '\n'
     << "sparse_span_ns = " << num(c.sparse.cluster_span_ns) << '\n'
     << "sparse_ray_rate = " << num(c.sparse.ray_rate) << '\n'
     << "threads = " << c.threads << '\n';
  return os.str();
}

}  // namespace monobit
