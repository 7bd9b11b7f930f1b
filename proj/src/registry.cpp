#include "monobit/registry.hpp"

#include <algorithm>

namespace monobit {

namespace {

constexpr IterationConfig kOneShot{0, 0.0};

}  // namespace

const std::vector<ReceiverInfo>& receiver_registry() {
  using enum SamplingMode;
  using enum TrainingLayout;
  static const std::vector<ReceiverInfo> registry = {
      {"FR-F-MF", full_resolution, single, false, "full-resolution samples, full CSI, matched-filter weights"},
      {"MB-F-ML", monobit, single, false, "monobit, full CSI, exact log-likelihood"},
      {"MB-F-MF", monobit, single, false, "monobit, full CSI, matched-filter weights"},
      {"MB-E-TE", monobit, single, false, "monobit, trained linear weights"},
      {"MB-E-TE-IR", monobit, single, true, "monobit, trained linear weights, pruning and iteration"},
      {"MB-F-MF-SI", monobit, single, false, "monobit, full CSI with imbalance, known sign factors"},
      {"MB-E-DT", monobit, dual, false, "monobit, double training"},
      {"MB-E-DT-IR", monobit, dual, true, "monobit, double training, pruning and iteration"},
      {"MB-E-CW", monobit, dual, false, "monobit, combinational weights from double training"},
      {"MB-E-CW-IR", monobit, dual, true, "monobit, combinational weights, pruning and iteration"},
      {"PQ-E-TE", phase8, single, false, "8-sector phase quantization, trained weights"},
      {"PQ-E-TE-IR", phase8, single, true, "8-sector phase quantization, pruning and iteration"},
  };
  return registry;
}

const ReceiverInfo& find_receiver(std::string_view id) {
  const auto& reg = receiver_registry();
  const auto it = std::find_if(reg.begin(), reg.end(), [id](const ReceiverInfo& r) { return r.id == id; });
  if (it == reg.end()) throw Error(ErrorKind::ConfigError, "unknown receiver '" + std::string(id) + "'");
  return *it;
}

LlfMatrix demodulate(const ReceiverInfo& rx, const BurstInput& in) {
  const std::string_view id = rx.id;
  const IterationConfig it = rx.iterative ? in.iteration : kOneShot;
  if (id.starts_with("MB-F") || id.starts_with("FR-F")) {
    if (in.ref == nullptr) throw Error(ErrorKind::InvalidArgument, "full-CSI receiver needs the reference");
  }

  if (id == "FR-F-MF") {
    // Gaussian ML combiner on real samples: weights p cos(phi), -p sin(phi).
    const WeightSet w{in.ref->samples * std::cos(in.phi.phi), -in.ref->samples * std::sin(in.phi.phi)};
    return suboptimal_llf(in.data, w);
  }
  if (id == "MB-F-ML") return optimal_llf(in.data, chip_error_probs(*in.ref, in.phi));
  if (id == "MB-F-MF") return suboptimal_llf(in.data, matched_filter_weights(*in.ref, in.phi));
  if (id == "MB-F-MF-SI") {
    const DoubleWeights dw = matched_filter_double_weights(*in.ref, in.phi, in.theta);
    return cw_llf(in.data, combinational_weights(dw), dw.a, dw.b);
  }
  if (id == "MB-E-TE" || id == "MB-E-TE-IR") return iterative_demodulate(in.data, in.training0, it).llf;
  if (id == "MB-E-DT" || id == "MB-E-DT-IR") {
    return iterative_demodulate_double(in.data, in.training0, in.training1, DoubleCombiner::double_training, it)
        .llf;
  }
  if (id == "MB-E-CW" || id == "MB-E-CW-IR") {
    return iterative_demodulate_double(in.data, in.training0, in.training1, DoubleCombiner::combinational, it).llf;
  }
  if (id == "PQ-E-TE" || id == "PQ-E-TE-IR") return iterative_demodulate_phase8(in.data, in.training0, it).llf;
  throw Error(ErrorKind::ConfigError, "receiver '" + rx.id + "' has no pipeline");
}

}  // namespace monobit
