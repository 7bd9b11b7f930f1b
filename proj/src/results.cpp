#include "monobit/experiment.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace monobit {

namespace {

constexpr const char* kHeader = "receiver,channel,snr_db,bits,errors,ber,seed";

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

template <typename T>
T field(const std::string& text, int line_no) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::ParseError, "results line " + std::to_string(line_no) + ": bad field '" + text + "'");
  }
  return value;
}

}  // namespace

std::string format_results(const std::vector<BerRecord>& records) {
  std::string out = std::string(kHeader) + '\n';
  char buf[160];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, ",%.17g,%llu,%llu,%.17g,%llu\n", r.snr_db,
                  static_cast<unsigned long long>(r.bits_sent), static_cast<unsigned long long>(r.bit_errors), r.ber,
                  static_cast<unsigned long long>(r.seed));
    out += r.receiver_id + ',' + r.channel_kind + buf;
  }
  return out;
}

void write_results(const std::vector<BerRecord>& records, const std::filesystem::path& path) {
  write_text(path, format_results(records));
}

std::vector<BerRecord> parse_results(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw Error(ErrorKind::ParseError, "results file lacks the expected header");
  }
  std::vector<BerRecord> out;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string item; std::getline(ls, item, ',');) f.push_back(item);
    if (f.size() != 7) throw Error(ErrorKind::ParseError, "results line " + std::to_string(line_no) + ": 7 fields expected");
    BerRecord r;
    r.receiver_id = f[0];
    r.channel_kind = f[1];
    r.snr_db = field<double>(f[2], line_no);
    r.bits_sent = field<std::uint64_t>(f[3], line_no);
    r.bit_errors = field<std::uint64_t>(f[4], line_no);
    r.ber = field<double>(f[5], line_no);
    r.seed = field<std::uint64_t>(f[6], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BerRecord> read_results(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_results(ss.str());
}

std::string plot_script(const std::vector<BerRecord>& records, const std::filesystem::path& csv_path) {
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.receiver_id).second) labels.push_back(r.receiver_id);
  }
  std::ostringstream os;
  os << "#!/usr/bin/env python3\n"
     << "import csv\n"
     << "import matplotlib\n"
     << "matplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\n\n"
     << "CSV = " << csv_path.filename() << "\n"
     << "CURVES = [\n";
  for (const auto& l : labels) os << "    \"" << l << "\",\n";
  os << "]\n\n"
     << "rows = list(csv.DictReader(open(CSV)))\n"
     << "fig, ax = plt.subplots()\n"
     << "for label in CURVES:\n"
     << "    pts = [(float(r[\"snr_db\"]), float(r[\"ber\"])) for r in rows\n"
     << "           if r[\"receiver\"] == label and float(r[\"ber\"]) > 0]\n"
     << "    if pts:\n"
     << "        ax.semilogy(*zip(*pts), marker=\"o\", label=label)\n"
     << "ax.set_xlabel(\"Eb/N0 (dB)\")\n"
     << "ax.set_ylabel(\"BER\")\n"
     << "ax.grid(True, which=\"both\")\n"
     << "ax.legend()\n"
     << "fig.savefig(CSV.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  return os.str();
}

void emit_plot_script(const std::vector<BerRecord>& records, const std::filesystem::path& csv_path,
                      const std::filesystem::path& script_path) {
  write_text(script_path, plot_script(records, csv_path));
}

}  // namespace monobit
