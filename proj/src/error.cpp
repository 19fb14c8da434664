#include "grj/error.hpp"

namespace grj {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::NonPositiveSlackBound: return "NonPositiveSlackBound";
    case ErrorCode::OutOfBox: return "OutOfBox";
    case ErrorCode::NoFeasiblePointFound: return "NoFeasiblePointFound";
    case ErrorCode::NoNondegenerateBasis: return "NoNondegenerateBasis";
    case ErrorCode::RankDeficientJacobian: return "RankDeficientJacobian";
    case ErrorCode::NewtonDiverged: return "NewtonDiverged";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::LineSearchFailed: return "LineSearchFailed";
    case ErrorCode::EmptyUnion: return "EmptyUnion";
    case ErrorCode::DegenerateReference: return "DegenerateReference";
    case ErrorCode::OracleInfeasible: return "OracleInfeasible";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownProblem: return "UnknownProblem";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace grj
