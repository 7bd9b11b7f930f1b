#pragma once

#include "monobit/channel.hpp"
#include "monobit/core.hpp"
#include "monobit/frontend.hpp"
#include "monobit/waveform.hpp"

#include <utility>
#include <vector>

namespace monobit {

inline constexpr double kEpsilonMin = 1e-12;

/// Per-sample chip error probabilities of the I and Q branches.
struct ChipErrorProbs {
  Vector<double> i, q;

  Index size() const { return i.size(); }
};

/// Chip error probabilities under phase imbalance: the ^0 pair belongs to the
/// (1,1) symbol, the ^1 pair to the (1,-1) symbol.
struct ImbalancedChipErrorProbs {
  ChipErrorProbs zero, one;
};

/// Combining weights (estimates of 1 - 2 epsilon), one pair per sample.
template <typename Scalar>
struct WeightSetT {
  Vector<Scalar> i, q;

  Index size() const { return i.size(); }
  Scalar max_magnitude() const {
    return i.size() == 0 ? Scalar(0) : std::max(i.cwiseAbs().maxCoeff(), q.cwiseAbs().maxCoeff());
  }
};

using WeightSet = WeightSetT<double>;

/// Weight families learned from the (1,1) and (1,-1) training sequences and
/// the sign factors A, B relating them.
struct DoubleWeights {
  WeightSet zero, one;
  int a = 1;
  int b = 1;
};

/// Weights for the I/Q pair and for the (I-Q, I+Q) pair of 8-sector frames.
struct PhaseQuadWeights {
  WeightSet main, aux;
};

struct Decision {
  SymbolPair symbol;
  int iteration_count = 0;
  Llf llf_values{};
};

/// Row h of an LLF matrix holds hypothesis kHypotheses[h], one column per symbol.
using LlfMatrix = Eigen::Matrix<double, 4, Eigen::Dynamic>;

double clamp_epsilon(double eps);

ChipErrorProbs chip_error_probs(const ReferenceWaveform& ref, PhaseDifference phi);
/// Error probabilities of the (I-Q)/sqrt2 and (I+Q)/sqrt2 branches, in the
/// roles of I and Q respectively.
ChipErrorProbs chip_error_probs_aux(const ReferenceWaveform& ref, PhaseDifference phi);
ImbalancedChipErrorProbs chip_error_probs_imbalanced(const ReferenceWaveform& ref, PhaseDifference phi,
                                                     double theta);

/// Exact monobit log-likelihoods including the -2N log 2 constant.
Llf optimal_llf(const QuantizedFrame& frame, const ChipErrorProbs& eps);
LlfMatrix optimal_llf(const FrameBlock& block, const ChipErrorProbs& eps, Index first = 0, Index count = -1);
Decision ml_detect(const QuantizedFrame& frame, const ChipErrorProbs& eps);

/// Linear (first-order) combiner. Works for sign bits as well as for real
/// full-resolution samples.
template <typename DerivedI, typename DerivedQ, typename Scalar>
Llf suboptimal_llf(const Eigen::MatrixBase<DerivedI>& r_i, const Eigen::MatrixBase<DerivedQ>& r_q,
                   const WeightSetT<Scalar>& w) {
  // (1,1) -> a, (-1,-1) -> -a, (1,-1) -> b, (-1,1) -> -b.
  const double a = static_cast<double>(w.i.dot(r_i) + w.q.dot(r_q));
  const double b = static_cast<double>(w.i.dot(r_q) - w.q.dot(r_i));
  return {a, b, -b, -a};
}

Llf suboptimal_llf(const QuantizedFrame& frame, const WeightSet& w);
LlfMatrix suboptimal_llf(const FrameBlock& block, const WeightSet& w);

/// Weights from frames that all carry the (1,1) symbol: the per-sample mean.
WeightSet estimate_weights(const FrameBlock& training);
WeightSet matched_filter_weights(const ReferenceWaveform& ref, PhaseDifference phi);
/// Samples whose larger branch magnitude falls below threshold_frac times the
/// overall maximum are zeroed in both branches.
WeightSet prune_small_weights(const WeightSet& w, double threshold_frac);

/// Rotate frame columns back to the (1,1) reference using the decided symbols,
/// i.e. multiply (r_I + j r_Q) by e^{-j g(d1, d0)}.
void derotate_columns(Matrix<double>& r_i, Matrix<double>& r_q, const std::vector<SymbolPair>& decided);

DoubleWeights estimate_double_weights(const FrameBlock& training0, const FrameBlock& training1);
Llf double_training_llf(const QuantizedFrame& frame, const DoubleWeights& dw);
LlfMatrix double_training_llf(const FrameBlock& block, const DoubleWeights& dw);
/// sgn of the inner products <w_I^0, w_Q^1> and <w_Q^0, w_I^1>; sgn(0) = +1.
std::pair<int, int> estimate_sign_factors(const DoubleWeights& dw);
/// Sign factors implied by exact weights for a given phase and phase imbalance.
std::pair<int, int> true_sign_factors(PhaseDifference phi, double theta);
WeightSet combinational_weights(const DoubleWeights& dw);
/// Full-CSI double weights: noiseless branch amplitudes of the (1,1) and
/// (1,-1) symbols under phase imbalance, scaled to unit maximum, with the
/// true sign factors.
DoubleWeights matched_filter_double_weights(const ReferenceWaveform& ref, PhaseDifference phi, double theta);
/// Zero samples whose largest magnitude over all four families is small.
DoubleWeights prune_small_weights(const DoubleWeights& dw, double threshold_frac);
Llf cw_llf(const QuantizedFrame& frame, const WeightSet& cw, int a, int b);
LlfMatrix cw_llf(const FrameBlock& block, const WeightSet& cw, int a, int b);

PhaseQuadWeights estimate_phase8_weights(const FrameBlock& training);
Llf phase8_llf(const QuantizedFrame& frame, const WeightSet& w_main, const WeightSet& w_aux);
LlfMatrix phase8_llf(const FrameBlock& block, const WeightSet& w_main, const WeightSet& w_aux);

std::vector<SymbolPair> argmax_decisions(const LlfMatrix& llf);

// Iterative demodulation ------------------------------------------------------

struct IterationConfig {
  int max_iter = 5;
  double threshold_frac = 0.2;
};

struct IterativeResult {
  std::vector<Decision> decisions;
  int iteration_count = 0;
  LlfMatrix llf;
  /// Final I/Q (or main-pair) weights; for the double receivers the
  /// combinational or ^0 family.
  WeightSet weights;
};

/// Train on (1,1) frames, prune, detect, then refine the weights with the
/// de-rotated data frames until the decisions stop changing.
IterativeResult iterative_demodulate(const FrameBlock& frames, const FrameBlock& training,
                                     const IterationConfig& config = {});

enum class DoubleCombiner { double_training, combinational };

/// Iterative variant of the double-training receivers. Detected symbols are
/// folded into the ^0 / ^1 families according to their class; sign factors
/// are taken from `sign_factors` when given, otherwise estimated.
IterativeResult iterative_demodulate_double(const FrameBlock& frames, const FrameBlock& training0,
                                            const FrameBlock& training1, DoubleCombiner combiner,
                                            const IterationConfig& config,
                                            const std::pair<int, int>* sign_factors = nullptr);

IterativeResult iterative_demodulate_phase8(const FrameBlock& frames, const FrameBlock& training,
                                            const IterationConfig& config);

}  // namespace monobit
