#include "monobit/channel.hpp"

#include "monobit/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace monobit {

namespace {

constexpr double kNs = 1e-9;

void normalize_power(ChannelRealization& ch) {
  const double p = ch.total_power();
  if (p <= 0.0) return;
  const double g = 1.0 / std::sqrt(p);
  for (auto& t : ch.taps) t.gain *= g;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, int line_no) {
  field = trim(field);
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad number '" +
                                           std::string(field) + "'");
  }
  return v;
}

}  // namespace

double ChannelRealization::total_power() const {
  double p = 0.0;
  for (const auto& t : taps) p += std::norm(t.gain);
  return p;
}

double ChannelRealization::max_delay() const { return taps.empty() ? 0.0 : taps.back().delay; }

bool ChannelRealization::is_real() const {
  return std::all_of(taps.begin(), taps.end(), [](const Tap& t) { return t.gain.imag() == 0.0; });
}

PhaseDifference PhaseDifference::from_radians(double radians) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(radians, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return PhaseDifference{r};
}

double PhaseDifference::degrees() const { return phi * 180.0 / std::numbers::pi; }

ChannelRealization awgn_channel() { return ChannelRealization{{Tap{0.0, {1.0, 0.0}}}, "awgn"}; }

ChannelRealization dense_multipath(std::uint64_t seed, const DenseProfile& profile) {
  if (profile.num_taps < 1 || !(profile.decay_ns > 0.0) || !(profile.spacing_ns > 0.0)) {
    throw Error(ErrorKind::InvalidProfile, "dense profile parameters must be positive");
  }
  Engine rng(seed);
  std::normal_distribution<double> gauss;
  ChannelRealization ch;
  ch.label = "dense:" + std::to_string(seed);
  ch.taps.reserve(static_cast<std::size_t>(profile.num_taps));
  for (int k = 0; k < profile.num_taps; ++k) {
    const double delay_ns = k * profile.spacing_ns;
    const double sigma = std::sqrt(std::exp(-delay_ns / profile.decay_ns));
    ch.taps.push_back(Tap{delay_ns * kNs, {sigma * gauss(rng), 0.0}});
  }
  normalize_power(ch);
  return ch;
}

ChannelRealization sparse_multipath(std::uint64_t seed, const SparseProfile& profile) {
  if (profile.num_clusters < 1 || !(profile.cluster_span_ns > 0.0) || profile.ray_rate < 0.0) {
    throw Error(ErrorKind::InvalidProfile, "sparse profile parameters must be positive");
  }
  constexpr double ray_spacing_ns = 0.5;   // mean ray inter-arrival within a cluster
  constexpr double ray_decay_ns = 1.0;     // intra-cluster power decay
  constexpr double leading_boost = 10.0;   // power of the first ray relative to the rest
  const double cluster_decay_ns = profile.cluster_span_ns / 2.0;

  Engine rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uniform(0.0, profile.cluster_span_ns);
  std::exponential_distribution<double> inter_arrival(1.0 / ray_spacing_ns);
  std::poisson_distribution<int> extra_rays(profile.ray_rate > 0.0 ? profile.ray_rate : 1.0);

  std::vector<double> arrivals{0.0};
  for (int c = 1; c < profile.num_clusters; ++c) arrivals.push_back(uniform(rng));
  std::sort(arrivals.begin(), arrivals.end());

  // Delays are kept on a 1 ps grid so coincident rays merge deterministically.
  std::map<long long, double> merged;
  for (std::size_t c = 0; c < arrivals.size(); ++c) {
    const double cluster_power = std::exp(-arrivals[c] / cluster_decay_ns);
    const int rays = 1 + (profile.ray_rate > 0.0 ? extra_rays(rng) : 0);
    double offset = 0.0;
    for (int r = 0; r < rays; ++r) {
      if (r > 0) offset += inter_arrival(rng);
      double power = cluster_power * std::exp(-offset / ray_decay_ns);
      double gain;
      if (c == 0 && r == 0) {
        gain = std::sqrt(power * leading_boost);
      } else {
        gain = std::sqrt(power) * gauss(rng);
      }
      const auto key = std::llround((arrivals[c] + offset) * 1000.0);
      merged[key] += gain;
    }
  }

  ChannelRealization ch;
  ch.label = "sparse:" + std::to_string(seed);
  for (const auto& [ps, gain] : merged) {
    if (gain != 0.0) ch.taps.push_back(Tap{static_cast<double>(ps) * 1e-12, {gain, 0.0}});
  }
  normalize_power(ch);
  return ch;
}

ChannelRealization parse_channel_text(const std::string& text, const std::string& label) {
  ChannelRealization ch;
  ch.label = label;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto c1 = view.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : view.find(',', c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos ||
        view.find(',', c2 + 1) != std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Tap tap;
    tap.delay = parse_field(view.substr(0, c1), line_no);
    tap.gain = {parse_field(view.substr(c1 + 1, c2 - c1 - 1), line_no),
                parse_field(view.substr(c2 + 1), line_no)};
    if (tap.delay < 0.0) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": negative delay");
    }
    if (!ch.taps.empty() && !(tap.delay > ch.taps.back().delay)) {
      throw Error(ErrorKind::NonMonotoneDelays, "line " + std::to_string(line_no));
    }
    ch.taps.push_back(tap);
  }
  if (ch.taps.empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": no taps");
  return ch;
}

ChannelRealization load_channel_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_channel_text(buffer.str(), path.filename().string());
}

void save_channel_file(const ChannelRealization& channel, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "# " << channel.label << "\n# delay_seconds,real_gain,imag_gain\n";
  char buf[96];
  for (const auto& t : channel.taps) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", t.delay, t.gain.real(), t.gain.imag());
    out << buf;
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

PhaseDifference draw_phase(std::uint64_t seed) {
  Engine rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return PhaseDifference::from_radians(u(rng));
}

PhaseDifference fixed_phase(double degrees) { return PhaseDifference::from_radians(degrees * std::numbers::pi / 180.0); }

Vector<std::complex<double>> noise_frame(std::uint64_t seed, Index n_samples) {
  Engine rng(seed);
  std::normal_distribution<double> gauss;
  Vector<std::complex<double>> out(n_samples);
  for (Index n = 0; n < n_samples; ++n) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    out[n] = {re, im};
  }
  return out;
}

}  // namespace monobit
