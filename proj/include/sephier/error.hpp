#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sephier {

enum class ErrorKind {
  InvalidInput,
  NotHermitian,
  RankMismatch,
  DimensionMismatch,
  Overflow,
  NotHomogeneous,
  OddDegree,
  NotOnSphere,
  CapExceeded,
  SizeOverflow,
  DualInfeasible,
  ShapeMismatch,
  InconsistentConstraints,
  TooManyVariables,
  SolverFailure,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure reported by the library. The kind is
/// what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by Buchberger when a pair would reduce above the degree cap.
class CapExceededError : public Error {
 public:
  CapExceededError(int degree, int cap);

  int degree() const noexcept { return degree_; }
  int cap() const noexcept { return cap_; }

 private:
  int degree_;
  int cap_;
};

}  // namespace sephier
