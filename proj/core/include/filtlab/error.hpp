#pragma once

#include <stdexcept>
#include <string>

namespace filtlab {

enum class ErrorCode {
  ProbabilityNotNormalized,
  PartitionNotRefining,
  ZeroProbabilityBlock,
  TimeOutOfRange,
  NotEquivalent,
  NotAdapted,
  NotPredictable,
  NotFiniteVariation,
  NotIncreasing,
  FieldAxiomViolation,
  HypothesisHPFails,
  DegenerateDenominator,
  EDVerificationFails,
  ShapeMismatch,
  RealizationMismatch,
  NegativeMassIncrement,
  SeparabilityPreconditionFails,
  PositivityFails,
  FieldNotStrictlyPositive,
  NotHonest,
  NotMartingale,
  InitialDecompositionInvalid,
  DensityNotPositive,
  NormalizationFails,
  ParseError,
  ValidationError,
  UnknownCommand,
};

const char* to_string(ErrorCode code);

// Single exception type for all structured library errors. The code is the
// machine-readable identity; what() carries the human context (block names,
// time slots, offending values).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace filtlab
