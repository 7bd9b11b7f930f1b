#include "monobit/experiment.hpp"

#include "monobit/coding.hpp"
#include "monobit/registry.hpp"
#include "monobit/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <optional>
#include <thread>

namespace monobit {

namespace {

struct Curve {
  const ReceiverInfo* rx = nullptr;
  std::optional<double> phase_deg;
  std::optional<LlrKind> llr;
  std::string label;
};

std::string phase_suffix(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%g", deg);
  return buf;
}

const char* llr_suffix(LlrKind k) {
  switch (k) {
    case LlrKind::exact: return "-LLR-Opt";
    case LlrKind::maxlog: return "-LLR-Sub";
    case LlrKind::hard: return "-LLR-Hard";
  }
  return "";
}

std::vector<Curve> build_curves(const ExperimentConfig& cfg) {
  std::vector<std::optional<double>> phases;
  if (cfg.phase_mode == PhaseMode::fixed) {
    phases.assign(cfg.fixed_phases_deg.begin(), cfg.fixed_phases_deg.end());
  } else {
    phases.push_back(std::nullopt);
  }
  std::vector<std::optional<LlrKind>> llrs;
  if (cfg.coding == CodingKind::conv_r12) {
    llrs.assign(cfg.llr.begin(), cfg.llr.end());
  } else {
    llrs.push_back(std::nullopt);
  }
  std::vector<Curve> curves;
  for (const auto& id : cfg.receivers) {
    const ReceiverInfo& rx = find_receiver(id);
    for (const auto& ph : phases) {
      for (const auto& llr : llrs) {
        std::string label = rx.id;
        if (ph) label += phase_suffix(*ph);
        if (llr) label += llr_suffix(*llr);
        curves.push_back(Curve{&rx, ph, llr, std::move(label)});
      }
    }
  }
  return curves;
}

struct BurstTally {
  std::uint64_t bits = 0;
  std::uint64_t errors = 0;
};

struct BurstRunner {
  const ExperimentConfig& cfg;
  std::vector<ReferenceWaveform> unit_refs;

  int info_bits() const { return 2 * cfg.n_data - ConvCode::kMemory; }

  std::vector<SymbolPair> training_symbols(TrainingLayout layout) const {
    std::vector<SymbolPair> s(static_cast<std::size_t>(cfg.n_training), SymbolPair{1, 1});
    if (layout == TrainingLayout::dual) {
      const int n0 = cfg.n_training / 2;
      std::fill(s.begin() + n0, s.end(), SymbolPair{1, -1});
    }
    return s;
  }

  BurstTally run_burst(const Curve& curve, const std::vector<ReferenceWaveform>& refs, std::size_t snr_idx,
                       std::uint64_t b) const {
    const std::uint64_t master = cfg.master_seed;
    const ReferenceWaveform& ref = refs[b % refs.size()];
    const PhaseDifference phi = curve.phase_deg ? fixed_phase(*curve.phase_deg)
                                                : draw_phase(derive_seed(master, {b}, "phase"));

    std::vector<SymbolPair> symbols = training_symbols(curve.rx->training);
    const std::size_t nt = symbols.size();
    monobit::Engine data_rng(derive_seed(master, {b}, "data"));
    std::vector<std::uint8_t> info;
    if (curve.llr) {
      info.resize(static_cast<std::size_t>(info_bits()));
      for (auto& bit : info) bit = static_cast<std::uint8_t>(data_rng() & 1u);
      const auto coded = conv_encode(info);
      for (std::size_t k = 0; k < coded.size() / 2; ++k) {
        symbols.push_back(SymbolPair{bit_to_symbol(coded[2 * k]), bit_to_symbol(coded[2 * k + 1])});
      }
    } else {
      for (int k = 0; k < cfg.n_data; ++k) {
        const auto word = data_rng();
        symbols.push_back(SymbolPair{(word & 1u) ? -1 : 1, (word & 2u) ? -1 : 1});
      }
    }

    const FrameBlock block = sample_symbol_stream(ref, symbols, phi, cfg.imbalance,
                                                  derive_seed(master, {snr_idx, b}, "noise"), curve.rx->mode);
    BurstInput in;
    in.ref = &ref;
    in.phi = phi;
    in.theta = cfg.imbalance.theta;
    in.iteration = cfg.iteration;
    const auto nt_i = static_cast<Index>(nt);
    if (curve.rx->training == TrainingLayout::dual) {
      const Index n0 = cfg.n_training / 2;
      in.training0 = slice(block, 0, n0);
      in.training1 = slice(block, n0, nt_i - n0);
    } else {
      in.training0 = slice(block, 0, nt_i);
    }
    in.data = slice(block, nt_i, block.symbols() - nt_i);

    const LlfMatrix llf = demodulate(*curve.rx, in);
    BurstTally tally;
    if (!curve.llr) {
      const auto decided = argmax_decisions(llf);
      for (std::size_t k = 0; k < decided.size(); ++k) {
        const SymbolPair& tx = symbols[nt + k];
        tally.errors += static_cast<std::uint64_t>((decided[k].d1 != tx.d1) + (decided[k].d0 != tx.d0));
      }
      tally.bits = 2 * decided.size();
      return tally;
    }

    std::vector<std::uint8_t> decoded;
    if (*curve.llr == LlrKind::hard) {
      const auto decided = argmax_decisions(llf);
      std::vector<int> hard;
      hard.reserve(2 * decided.size());
      for (const auto& s : decided) {
        hard.push_back(s.d1);
        hard.push_back(s.d0);
      }
      decoded = hard_decode(hard);
    } else {
      std::vector<double> llrs;
      llrs.reserve(2 * static_cast<std::size_t>(llf.cols()));
      for (Index k = 0; k < llf.cols(); ++k) {
        const Llf l{llf(0, k), llf(1, k), llf(2, k), llf(3, k)};
        const BitLLR bl = *curve.llr == LlrKind::exact ? llr_exact(l) : llr_maxlog(l);
        llrs.push_back(bl.llr1);
        llrs.push_back(bl.llr0);
      }
      decoded = soft_decode(llrs);
    }
    for (std::size_t i = 0; i < info.size(); ++i) tally.errors += decoded[i] != info[i];
    tally.bits = info.size();
    return tally;
  }

  static FrameBlock slice(const FrameBlock& block, Index first, Index count) {
    FrameBlock out;
    out.i = block.i.middleCols(first, count);
    out.q = block.q.middleCols(first, count);
    if (block.has_aux()) {
      out.sum = block.sum.middleCols(first, count);
      out.diff = block.diff.middleCols(first, count);
    }
    return out;
  }
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers and rethrows the
/// lowest-index failure.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

bool is_multipath(ChannelKind k) { return k == ChannelKind::dense || k == ChannelKind::sparse; }

}  // namespace

const char* to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::awgn: return "awgn";
    case ChannelKind::dense: return "dense";
    case ChannelKind::sparse: return "sparse";
    case ChannelKind::file: return "file";
  }
  return "unknown";
}

const char* to_string(LlrKind k) {
  switch (k) {
    case LlrKind::exact: return "exact";
    case LlrKind::maxlog: return "maxlog";
    case LlrKind::hard: return "hard";
  }
  return "unknown";
}

std::vector<ChannelRealization> experiment_channels(const ExperimentConfig& cfg) {
  switch (cfg.channel_kind) {
    case ChannelKind::awgn: return {awgn_channel()};
    case ChannelKind::file: return {load_channel_file(cfg.channel_file)};
    case ChannelKind::dense:
    case ChannelKind::sparse: {
      std::vector<ChannelRealization> out;
      for (int r = 0; r < cfg.realizations; ++r) {
        const auto seed = derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(r)}, "channel");
        out.push_back(cfg.channel_kind == ChannelKind::dense ? dense_multipath(seed, cfg.dense)
                                                             : sparse_multipath(seed, cfg.sparse));
      }
      return out;
    }
  }
  return {};
}

std::vector<BerRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<Curve> curves = build_curves(cfg);
  BurstRunner engine{cfg, {}};
  for (const auto& ch : experiment_channels(cfg)) {
    engine.unit_refs.push_back(build_reference(cfg.pulse, ch, cfg.grid));
  }
  const int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::uint64_t min_bursts = is_multipath(cfg.channel_kind) ? engine.unit_refs.size() : 1;
  constexpr std::size_t kMaxBatch = 64;

  std::vector<BerRecord> records;
  std::vector<std::vector<ReferenceWaveform>> scaled(cfg.snr_grid.size());
  for (std::size_t s = 0; s < cfg.snr_grid.size(); ++s) {
    for (const auto& ref : engine.unit_refs) scaled[s].push_back(scale_to_snr(ref, cfg.snr_grid[s]));
  }

  for (const Curve& curve : curves) {
    for (std::size_t s = 0; s < cfg.snr_grid.size(); ++s) {
      BerRecord rec;
      rec.snr_db = cfg.snr_grid[s];
      rec.receiver_id = curve.label;
      rec.channel_kind = to_string(cfg.channel_kind);
      rec.seed = cfg.master_seed;
      std::uint64_t done = 0;
      bool finished = false;
      std::size_t batch = 1;
      while (!finished) {
        std::vector<BurstTally> tallies(batch);
        parallel_for(batch, threads, [&](std::size_t i) {
          const std::uint64_t b = done + i;
          try {
            tallies[i] = engine.run_burst(curve, scaled[s], s, b);
          } catch (const Error& e) {
            char ctx[96];
            std::snprintf(ctx, sizeof ctx, " (snr %g dB, realization %llu)", cfg.snr_grid[s],
                          static_cast<unsigned long long>(b % scaled[s].size()));
            std::string msg = e.what();
            if (const auto colon = msg.find(": "); colon != std::string::npos) msg.erase(0, colon + 2);
            throw Error(e.kind(), msg + ctx);
          }
        });
        // Truncate at the first burst that satisfies the stopping rule so the
        // result does not depend on the batch size or worker count.
        for (const auto& t : tallies) {
          rec.bits_sent += t.bits;
          rec.bit_errors += t.errors;
          ++done;
          if (done >= min_bursts && (rec.bit_errors >= cfg.min_bit_errors || rec.bits_sent >= cfg.max_bits)) {
            finished = true;
            break;
          }
        }
        batch = std::min(batch * 2, kMaxBatch);
      }
      rec.ber = static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits_sent);
      records.push_back(rec);
      if (cfg.stop_ber > 0.0 && rec.ber < cfg.stop_ber) break;
    }
  }
  return records;
}

}  // namespace monobit
