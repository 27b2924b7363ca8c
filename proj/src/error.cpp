#include "henon/error.hpp"

namespace henon {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::WeightSingularity: return "weight-singularity";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::NotApplicable: return "not-applicable";
    case ErrorKind::StaleKernel: return "stale-kernel";
    case ErrorKind::SupercriticalDimension: return "supercritical-dimension";
    case ErrorKind::ExponentDerivation: return "exponent-derivation";
    case ErrorKind::DegenerateDirection: return "degenerate-direction";
    case ErrorKind::NoCandidate: return "no-candidate";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::UndefinedRatio: return "undefined-ratio";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace henon
