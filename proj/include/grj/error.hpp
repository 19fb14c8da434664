#pragma once

#include <stdexcept>
#include <string>

namespace grj {

enum class ErrorCode {
  SingularMatrix,
  DimensionMismatch,
  NonFiniteEvaluation,
  NonPositiveSlackBound,
  OutOfBox,
  NoFeasiblePointFound,
  NoNondegenerateBasis,
  RankDeficientJacobian,
  NewtonDiverged,
  ZeroDirection,
  LineSearchFailed,
  EmptyUnion,
  DegenerateReference,
  OracleInfeasible,
  InvalidArgument,
  UnknownProblem,
  Io,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace grj
