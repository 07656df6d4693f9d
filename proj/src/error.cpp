#include "sephier/error.hpp"

namespace sephier {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::NotHomogeneous: return "NotHomogeneous";
    case ErrorKind::OddDegree: return "OddDegree";
    case ErrorKind::NotOnSphere: return "NotOnSphere";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::SizeOverflow: return "SizeOverflow";
    case ErrorKind::DualInfeasible: return "DualInfeasible";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::InconsistentConstraints: return "InconsistentConstraints";
    case ErrorKind::TooManyVariables: return "TooManyVariables";
    case ErrorKind::SolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

CapExceededError::CapExceededError(int degree, int cap)
    : Error(ErrorKind::CapExceeded,
            "S-polynomial degree " + std::to_string(degree) + " exceeds cap " + std::to_string(cap)),
      degree_(degree),
      cap_(cap) {}

}  // namespace sephier
