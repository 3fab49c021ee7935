#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace loclab {

enum class ErrorCode {
  InvalidArgument,
  DimensionTooLarge,
  DimensionMismatch,
  IndexOutOfRange,
  BoundaryEigenvalue,
  DefectTooLarge,
  SignIterationDiverged,
  NonIntegralTrace,
  NotUnitary,
  HypothesisViolated,
  SingularMatrix,
  OddSignature,
  WindowViolated,
  TruncationTooSmall,
  RankDecisionAmbiguous,
  InvalidWeights,
  ConfigInvalid,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a spectral cut point sits within gap_tol of an eigenvalue.
class BoundaryEigenvalueError : public Error {
 public:
  BoundaryEigenvalueError(double eigenvalue, double distance, const std::string& what)
      : Error(ErrorCode::BoundaryEigenvalue, what), eigenvalue(eigenvalue), distance(distance) {}

  double eigenvalue;
  double distance;
};

class SignIterationDivergedError : public Error {
 public:
  SignIterationDivergedError(std::vector<double> residuals, const std::string& what)
      : Error(ErrorCode::SignIterationDiverged, what), residuals(std::move(residuals)) {}

  /// ||Z_k^2 - I|| after each Newton step.
  std::vector<double> residuals;
};

}  // namespace loclab
