#include "loclab/errors.hpp"

namespace loclab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BoundaryEigenvalue: return "BoundaryEigenvalue";
    case ErrorCode::DefectTooLarge: return "DefectTooLarge";
    case ErrorCode::SignIterationDiverged: return "SignIterationDiverged";
    case ErrorCode::NonIntegralTrace: return "NonIntegralTrace";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::OddSignature: return "OddSignature";
    case ErrorCode::WindowViolated: return "WindowViolated";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::RankDecisionAmbiguous: return "RankDecisionAmbiguous";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace loclab
