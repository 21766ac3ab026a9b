#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace neighborlat {

// Precondition failures carry a stable machine-readable code; the CLI maps
// them to exit status 2.
enum class ErrorCode {
  kInvalidInput,
  kDimensionMismatch,
  kNotSymmetric,
  kDegenerateForm,
  kOddLattice,
  kNotIntegral,
  kNotContained,
  kGcdViolation,
  kBudgetExceeded,
  kNotIsotropic,
  kNotNeighbor,
  kNonSplit,
  kUnsupportedPrime,
  kInsufficientPrecision,
  kNoUnimodularPart,
  kInconsistentLocalData,
  kHypothesisFailed,
  kWrongSignature,
  kGaussSumVanishes,
  kOverflow,
};

std::string_view error_code_name(ErrorCode code);

class LatticeError : public std::runtime_error {
 public:
  LatticeError(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when an internal consistency check fails; indicates a bug rather
// than bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace neighborlat
