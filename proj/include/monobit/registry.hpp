#pragma once

#include "monobit/frontend.hpp"
#include "monobit/receivers.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace monobit {

enum class TrainingLayout {
  single,  // N_t frames of (1,1)
  dual,    // N_t / 2 frames of (1,1) followed by N_t / 2 frames of (1,-1)
};

/// One entry of the FR/MB/PQ x F/E x ML/MF/TE/DT/CW x IR/SI taxonomy.
struct ReceiverInfo {
  std::string id;
  SamplingMode mode = SamplingMode::monobit;
  TrainingLayout training = TrainingLayout::single;
  bool iterative = false;
  std::string description;
};

const std::vector<ReceiverInfo>& receiver_registry();
/// Throws ConfigError for ids outside the registry.
const ReceiverInfo& find_receiver(std::string_view id);

/// Everything a receiver may look at for one burst. Full-CSI receivers use
/// ref, phi and theta; estimated-CSI receivers only the frames.
struct BurstInput {
  const ReferenceWaveform* ref = nullptr;
  PhaseDifference phi;
  double theta = 0.0;
  FrameBlock training0;  // (1,1) frames
  FrameBlock training1;  // (1,-1) frames, dual layout only
  FrameBlock data;
  IterationConfig iteration;
};

/// Four log-likelihood values per data symbol.
LlfMatrix demodulate(const ReceiverInfo& rx, const BurstInput& in);

}  // namespace monobit
