#include "monobit/receivers.hpp"

#include "monobit/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace monobit {

namespace {

ChipErrorProbs probs_from_amplitudes(const Vector<double>& amp_i, const Vector<double>& amp_q) {
  ChipErrorProbs eps;
  eps.i = amp_i.unaryExpr([](double x) { return clamp_epsilon(q_function(x)); });
  eps.q = amp_q.unaryExpr([](double x) { return clamp_epsilon(q_function(x)); });
  return eps;
}

void require_same_length(Index a, Index b, const char* what) {
  if (a != b) throw Error(ErrorKind::LengthMismatch, what);
}

int sgn(double x) { return x >= 0.0 ? 1 : -1; }

WeightSet scaled_to_unit_max(WeightSet w) {
  const double m = w.max_magnitude();
  if (!(m > 0.0)) throw Error(ErrorKind::ZeroEnergyWaveform, "reference has no energy");
  w.i /= m;
  w.q /= m;
  return w;
}

}  // namespace

double clamp_epsilon(double eps) { return std::clamp(eps, kEpsilonMin, 1.0 - kEpsilonMin); }

ChipErrorProbs chip_error_probs(const ReferenceWaveform& ref, PhaseDifference phi) {
  return probs_from_amplitudes(ref.samples * std::cos(phi.phi), ref.samples * std::sin(-phi.phi));
}

ChipErrorProbs chip_error_probs_aux(const ReferenceWaveform& ref, PhaseDifference phi) {
  // The (I-Q, I+Q)/sqrt2 pair sees the signal rotated by +45 degrees.
  const double shifted = phi.phi - std::numbers::pi / 4;
  return probs_from_amplitudes(ref.samples * std::cos(shifted), ref.samples * std::sin(-shifted));
}

ImbalancedChipErrorProbs chip_error_probs_imbalanced(const ReferenceWaveform& ref, PhaseDifference phi,
                                                     double theta) {
  const double plus = phi.phi + theta / 2.0;
  const double minus = phi.phi - theta / 2.0;
  const auto& p = ref.samples;
  ImbalancedChipErrorProbs eps;
  eps.zero = probs_from_amplitudes(p * std::cos(plus), -p * std::sin(minus));
  eps.one = probs_from_amplitudes(p * std::sin(plus), p * std::cos(minus));
  return eps;
}

LlfMatrix optimal_llf(const FrameBlock& block, const ChipErrorProbs& eps, Index first, Index count) {
  require_same_length(block.samples(), eps.size(), "frame and error probabilities differ in length");
  if (count < 0) count = block.symbols() - first;
  const Index n = eps.size();

  // log(1 + s w) for s = +-1 equals c + s * h with
  // c = (log(2(1-eps)) + log(2 eps)) / 2 and h = log((1-eps)/eps) / 2.
  Vector<double> h_i(n), h_q(n);
  double constant = 0.0;
  for (Index l = 0; l < n; ++l) {
    const double ei = clamp_epsilon(eps.i[l]);
    const double eq = clamp_epsilon(eps.q[l]);
    h_i[l] = 0.5 * (std::log1p(-ei) - std::log(ei));
    h_q[l] = 0.5 * (std::log1p(-eq) - std::log(eq));
    constant += 0.5 * (std::log1p(-ei) + std::log(ei) + std::log1p(-eq) + std::log(eq));
  }
  // The -2N log 2 of the log-likelihood cancels the log 2 inside each c.

  const auto r_i = block.i.middleCols(first, count);
  const auto r_q = block.q.middleCols(first, count);
  const Eigen::RowVectorXd a = h_i.transpose() * r_i + h_q.transpose() * r_q;
  const Eigen::RowVectorXd b = h_i.transpose() * r_q - h_q.transpose() * r_i;
  LlfMatrix llf(4, count);
  llf.row(0) = (a.array() + constant).matrix();
  llf.row(1) = (b.array() + constant).matrix();
  llf.row(2) = (constant - b.array()).matrix();
  llf.row(3) = (constant - a.array()).matrix();
  return llf;
}

Llf optimal_llf(const QuantizedFrame& frame, const ChipErrorProbs& eps) {
  const LlfMatrix m = optimal_llf(frame, eps, 0, 1);
  return {m(0, 0), m(1, 0), m(2, 0), m(3, 0)};
}

Decision ml_detect(const QuantizedFrame& frame, const ChipErrorProbs& eps) {
  Decision d;
  d.llf_values = optimal_llf(frame, eps);
  d.symbol = argmax_hypothesis(d.llf_values);
  return d;
}

Llf suboptimal_llf(const QuantizedFrame& frame, const WeightSet& w) {
  require_same_length(frame.samples(), w.size(), "frame and weights differ in length");
  return suboptimal_llf(frame.i.col(0), frame.q.col(0), w);
}

LlfMatrix suboptimal_llf(const FrameBlock& block, const WeightSet& w) {
  require_same_length(block.samples(), w.size(), "frame and weights differ in length");
  const Eigen::RowVectorXd a = w.i.transpose() * block.i + w.q.transpose() * block.q;
  const Eigen::RowVectorXd b = w.i.transpose() * block.q - w.q.transpose() * block.i;
  LlfMatrix llf(4, block.symbols());
  llf << a, b, -b, -a;
  return llf;
}

WeightSet estimate_weights(const FrameBlock& training) {
  if (training.symbols() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no training frames");
  return WeightSet{training.i.rowwise().mean(), training.q.rowwise().mean()};
}

WeightSet matched_filter_weights(const ReferenceWaveform& ref, PhaseDifference phi) {
  return scaled_to_unit_max(WeightSet{ref.samples * std::cos(phi.phi), -ref.samples * std::sin(phi.phi)});
}

WeightSet prune_small_weights(const WeightSet& w, double threshold_frac) {
  if (!(threshold_frac >= 0.0 && threshold_frac < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold_frac must lie in [0, 1)");
  }
  const Vector<double> magnitude = w.i.cwiseAbs().cwiseMax(w.q.cwiseAbs());
  if (magnitude.size() == 0) return w;
  const double cut = threshold_frac * magnitude.maxCoeff();
  WeightSet out = w;
  for (Index l = 0; l < magnitude.size(); ++l) {
    if (magnitude[l] < cut) {
      out.i[l] = 0.0;
      out.q[l] = 0.0;
    }
  }
  return out;
}

DoubleWeights prune_small_weights(const DoubleWeights& dw, double threshold_frac) {
  if (!(threshold_frac >= 0.0 && threshold_frac < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "threshold_frac must lie in [0, 1)");
  }
  const Vector<double> magnitude = dw.zero.i.cwiseAbs()
                                       .cwiseMax(dw.zero.q.cwiseAbs())
                                       .cwiseMax(dw.one.i.cwiseAbs())
                                       .cwiseMax(dw.one.q.cwiseAbs());
  if (magnitude.size() == 0) return dw;
  const double cut = threshold_frac * magnitude.maxCoeff();
  DoubleWeights out = dw;
  for (Index l = 0; l < magnitude.size(); ++l) {
    if (magnitude[l] < cut) {
      out.zero.i[l] = out.zero.q[l] = out.one.i[l] = out.one.q[l] = 0.0;
    }
  }
  return out;
}

void derotate_columns(Matrix<double>& r_i, Matrix<double>& r_q, const std::vector<SymbolPair>& decided) {
  require_same_length(r_i.cols(), static_cast<Index>(decided.size()), "decision count mismatch");
  for (Index k = 0; k < r_i.cols(); ++k) {
    const SymbolPair s = decided[static_cast<std::size_t>(k)];
    if (s.d1 > 0 && s.d0 > 0) continue;
    if (s.d1 < 0 && s.d0 < 0) {
      r_i.col(k) = -r_i.col(k);
      r_q.col(k) = -r_q.col(k);
      continue;
    }
    Vector<double> i = r_i.col(k);
    if (s.d1 > 0) {  // (1,-1): multiply by -j
      r_i.col(k) = r_q.col(k);
      r_q.col(k) = -i;
    } else {  // (-1,1): multiply by +j
      r_i.col(k) = -r_q.col(k);
      r_q.col(k) = i;
    }
  }
}

DoubleWeights estimate_double_weights(const FrameBlock& training0, const FrameBlock& training1) {
  if (training0.symbols() == 0 || training1.symbols() == 0) {
    throw Error(ErrorKind::EmptyTrainingSet, "both training sequences must be nonempty");
  }
  DoubleWeights dw;
  dw.zero = estimate_weights(training0);
  dw.one = estimate_weights(training1);
  std::tie(dw.a, dw.b) = estimate_sign_factors(dw);
  return dw;
}

LlfMatrix double_training_llf(const FrameBlock& block, const DoubleWeights& dw) {
  require_same_length(block.samples(), dw.zero.size(), "frame and weights differ in length");
  const Eigen::RowVectorXd a0 = dw.zero.i.transpose() * block.i + dw.zero.q.transpose() * block.q;
  const Eigen::RowVectorXd a1 = dw.one.i.transpose() * block.i + dw.one.q.transpose() * block.q;
  LlfMatrix llf(4, block.symbols());
  llf << a0, a1, -a1, -a0;
  return llf;
}

Llf double_training_llf(const QuantizedFrame& frame, const DoubleWeights& dw) {
  const LlfMatrix m = double_training_llf(static_cast<const FrameBlock&>(frame), dw);
  return {m(0, 0), m(1, 0), m(2, 0), m(3, 0)};
}

std::pair<int, int> estimate_sign_factors(const DoubleWeights& dw) {
  return {sgn(dw.zero.i.dot(dw.one.q)), sgn(dw.zero.q.dot(dw.one.i))};
}

std::pair<int, int> true_sign_factors(PhaseDifference phi, double theta) {
  const double plus = phi.phi + theta / 2.0;
  const double minus = phi.phi - theta / 2.0;
  // w_I^0 ~ cos(plus), w_Q^1 ~ cos(minus); w_Q^0 ~ -sin(minus), w_I^1 ~ sin(plus).
  return {sgn(std::cos(plus) * std::cos(minus)), sgn(-std::sin(minus) * std::sin(plus))};
}

WeightSet combinational_weights(const DoubleWeights& dw) {
  return WeightSet{0.5 * dw.zero.i + (0.5 * dw.a) * dw.one.q, 0.5 * dw.zero.q + (0.5 * dw.b) * dw.one.i};
}

DoubleWeights matched_filter_double_weights(const ReferenceWaveform& ref, PhaseDifference phi, double theta) {
  const double plus = phi.phi + theta / 2.0;
  const double minus = phi.phi - theta / 2.0;
  const auto& p = ref.samples;
  DoubleWeights dw;
  dw.zero = WeightSet{p * std::cos(plus), -p * std::sin(minus)};
  dw.one = WeightSet{p * std::sin(plus), p * std::cos(minus)};
  const double m = std::max(dw.zero.max_magnitude(), dw.one.max_magnitude());
  if (!(m > 0.0)) throw Error(ErrorKind::ZeroEnergyWaveform, "reference has no energy");
  for (auto* w : {&dw.zero, &dw.one}) {
    w->i /= m;
    w->q /= m;
  }
  std::tie(dw.a, dw.b) = true_sign_factors(phi, theta);
  return dw;
}

LlfMatrix cw_llf(const FrameBlock& block, const WeightSet& cw, int a, int b) {
  require_same_length(block.samples(), cw.size(), "frame and weights differ in length");
  const Eigen::RowVectorXd s0 = cw.i.transpose() * block.i + cw.q.transpose() * block.q;
  const Eigen::RowVectorXd s1 =
      static_cast<double>(b) * (cw.q.transpose() * block.i) + static_cast<double>(a) * (cw.i.transpose() * block.q);
  LlfMatrix llf(4, block.symbols());
  llf << s0, s1, -s1, -s0;
  return llf;
}

Llf cw_llf(const QuantizedFrame& frame, const WeightSet& cw, int a, int b) {
  const LlfMatrix m = cw_llf(static_cast<const FrameBlock&>(frame), cw, a, b);
  return {m(0, 0), m(1, 0), m(2, 0), m(3, 0)};
}

PhaseQuadWeights estimate_phase8_weights(const FrameBlock& training) {
  if (!training.has_aux()) throw Error(ErrorKind::MissingAuxBranches, "training frames lack I+Q / I-Q branches");
  if (training.symbols() == 0) throw Error(ErrorKind::EmptyTrainingSet, "no training frames");
  PhaseQuadWeights w;
  w.main = WeightSet{training.i.rowwise().mean(), training.q.rowwise().mean()};
  w.aux = WeightSet{training.diff.rowwise().mean(), training.sum.rowwise().mean()};
  return w;
}

LlfMatrix phase8_llf(const FrameBlock& block, const WeightSet& w_main, const WeightSet& w_aux) {
  if (!block.has_aux()) throw Error(ErrorKind::MissingAuxBranches, "frame lacks I+Q / I-Q branches");
  require_same_length(block.samples(), w_aux.size(), "frame and weights differ in length");
  LlfMatrix llf = suboptimal_llf(block, w_main);
  const Eigen::RowVectorXd a = w_aux.i.transpose() * block.diff + w_aux.q.transpose() * block.sum;
  const Eigen::RowVectorXd b = w_aux.i.transpose() * block.sum - w_aux.q.transpose() * block.diff;
  llf.row(0) += a;
  llf.row(1) += b;
  llf.row(2) -= b;
  llf.row(3) -= a;
  return llf;
}

Llf phase8_llf(const QuantizedFrame& frame, const WeightSet& w_main, const WeightSet& w_aux) {
  const LlfMatrix m = phase8_llf(static_cast<const FrameBlock&>(frame), w_main, w_aux);
  return {m(0, 0), m(1, 0), m(2, 0), m(3, 0)};
}

std::vector<SymbolPair> argmax_decisions(const LlfMatrix& llf) {
  std::vector<SymbolPair> out(static_cast<std::size_t>(llf.cols()));
  for (Index k = 0; k < llf.cols(); ++k) {
    int best = 0;
    for (int h = 1; h < 4; ++h) {
      if (llf(h, k) > llf(best, k)) best = h;
    }
    out[static_cast<std::size_t>(k)] = kHypotheses[static_cast<std::size_t>(best)];
  }
  return out;
}

}  // namespace monobit
