#include "monobit/receivers.hpp"

#include <functional>

namespace monobit {

namespace {

struct BranchSums {
  Vector<double> i, q;
  double count = 0.0;

  WeightSet mean() const { return WeightSet{i / count, q / count}; }
};

BranchSums training_sums(const Matrix<double>& r_i, const Matrix<double>& r_q) {
  return {r_i.rowwise().sum(), r_q.rowwise().sum(), static_cast<double>(r_i.cols())};
}

/// Adds every data column after multiplying (r_i + j r_q) by e^{-j g(decided)}.
void add_derotated(BranchSums& acc, const Matrix<double>& r_i, const Matrix<double>& r_q,
                   const std::vector<SymbolPair>& decided) {
  for (Index k = 0; k < r_i.cols(); ++k) {
    const SymbolPair s = decided[static_cast<std::size_t>(k)];
    if (s.d1 > 0 && s.d0 > 0) {
      acc.i += r_i.col(k);
      acc.q += r_q.col(k);
    } else if (s.d1 < 0 && s.d0 < 0) {
      acc.i -= r_i.col(k);
      acc.q -= r_q.col(k);
    } else if (s.d1 > 0) {
      acc.i += r_q.col(k);
      acc.q -= r_i.col(k);
    } else {
      acc.i -= r_q.col(k);
      acc.q += r_i.col(k);
    }
  }
  acc.count += static_cast<double>(r_i.cols());
}

std::vector<Decision> to_decisions(const LlfMatrix& llf, const std::vector<SymbolPair>& symbols, int iterations) {
  std::vector<Decision> out(symbols.size());
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    const auto col = llf.col(static_cast<Index>(k));
    out[k] = Decision{symbols[k], iterations, Llf{col(0), col(1), col(2), col(3)}};
  }
  return out;
}

void validate(const FrameBlock& frames, const FrameBlock& training, const IterationConfig& config) {
  if (training.symbols() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no training frames");
  if (frames.samples() != training.samples()) {
    throw Error(ErrorKind::LengthMismatch, "data and training frames differ in length");
  }
  if (config.max_iter < 0) throw Error(ErrorKind::InvalidArgument, "max_iter must be nonnegative");
}

/// Shared refinement loop: `detect` maps the current decisions (empty on the
/// first pass) to a fresh LLF matrix and stores the weights it used.
IterativeResult run_loop(const IterationConfig& config,
                         const std::function<LlfMatrix(const std::vector<SymbolPair>*)>& detect,
                         const std::function<WeightSet()>& current_weights) {
  LlfMatrix llf = detect(nullptr);
  std::vector<SymbolPair> decided = argmax_decisions(llf);
  int iter = 0;
  while (iter < config.max_iter) {
    LlfMatrix next_llf = detect(&decided);
    std::vector<SymbolPair> next = argmax_decisions(next_llf);
    ++iter;
    const bool unchanged = next == decided;
    llf = std::move(next_llf);
    decided = std::move(next);
    if (unchanged) break;
  }
  IterativeResult result;
  result.decisions = to_decisions(llf, decided, iter);
  result.iteration_count = iter;
  result.llf = std::move(llf);
  result.weights = current_weights();
  return result;
}

}  // namespace

IterativeResult iterative_demodulate(const FrameBlock& frames, const FrameBlock& training,
                                     const IterationConfig& config) {
  validate(frames, training, config);
  const BranchSums base = training_sums(training.i, training.q);
  WeightSet w;
  auto detect = [&](const std::vector<SymbolPair>* decided) {
    BranchSums acc = base;
    if (decided) add_derotated(acc, frames.i, frames.q, *decided);
    w = prune_small_weights(acc.mean(), config.threshold_frac);
    return suboptimal_llf(frames, w);
  };
  return run_loop(config, detect, [&] { return w; });
}

IterativeResult iterative_demodulate_double(const FrameBlock& frames, const FrameBlock& training0,
                                            const FrameBlock& training1, DoubleCombiner combiner,
                                            const IterationConfig& config,
                                            const std::pair<int, int>* sign_factors) {
  validate(frames, training0, config);
  validate(frames, training1, config);
  const BranchSums base0 = training_sums(training0.i, training0.q);
  const BranchSums base1 = training_sums(training1.i, training1.q);
  WeightSet w;
  auto detect = [&](const std::vector<SymbolPair>* decided) {
    BranchSums acc0 = base0;
    BranchSums acc1 = base1;
    if (decided) {
      // (1,1) and (-1,-1) feed the ^0 family, (1,-1) and (-1,1) the ^1 family.
      for (Index k = 0; k < frames.symbols(); ++k) {
        const SymbolPair s = (*decided)[static_cast<std::size_t>(k)];
        BranchSums& acc = s.d1 == s.d0 ? acc0 : acc1;
        const double sign = s.d1 > 0 ? 1.0 : -1.0;
        acc.i += sign * frames.i.col(k);
        acc.q += sign * frames.q.col(k);
        acc.count += 1.0;
      }
    }
    DoubleWeights dw{acc0.mean(), acc1.mean()};
    dw = prune_small_weights(dw, config.threshold_frac);
    std::tie(dw.a, dw.b) = sign_factors ? *sign_factors : estimate_sign_factors(dw);
    if (combiner == DoubleCombiner::double_training) {
      w = dw.zero;
      return double_training_llf(frames, dw);
    }
    w = combinational_weights(dw);
    return cw_llf(frames, w, dw.a, dw.b);
  };
  return run_loop(config, detect, [&] { return w; });
}

IterativeResult iterative_demodulate_phase8(const FrameBlock& frames, const FrameBlock& training,
                                            const IterationConfig& config) {
  validate(frames, training, config);
  if (!frames.has_aux() || !training.has_aux()) {
    throw Error(ErrorKind::MissingAuxBranches, "8-sector receiver needs I+Q / I-Q branches");
  }
  const BranchSums base_main = training_sums(training.i, training.q);
  const BranchSums base_aux = training_sums(training.diff, training.sum);
  WeightSet w_main;
  auto detect = [&](const std::vector<SymbolPair>* decided) {
    BranchSums main = base_main;
    BranchSums aux = base_aux;
    if (decided) {
      // (diff + j sum) = e^{j pi/4} (I + j Q), so the same de-rotation applies.
      add_derotated(main, frames.i, frames.q, *decided);
      add_derotated(aux, frames.diff, frames.sum, *decided);
    }
    w_main = prune_small_weights(main.mean(), config.threshold_frac);
    const WeightSet w_aux = prune_small_weights(aux.mean(), config.threshold_frac);
    return phase8_llf(frames, w_main, w_aux);
  };
  return run_loop(config, detect, [&] { return w_main; });
}

}  // namespace monobit
