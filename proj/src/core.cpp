#include "monobit/core.hpp"

namespace monobit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DelaySpreadExceedsSymbol: return "DelaySpreadExceedsSymbol";
    case ErrorKind::ZeroEnergyWaveform: return "ZeroEnergyWaveform";
    case ErrorKind::InvalidChannel: return "InvalidChannel";
    case ErrorKind::InvalidProfile: return "InvalidProfile";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonMonotoneDelays: return "NonMonotoneDelays";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::MissingAuxBranches: return "MissingAuxBranches";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UnknownPreset: return "UnknownPreset";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace monobit
