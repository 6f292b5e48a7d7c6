#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fibersampler {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kDimensionMismatch,
  kNegativeCount,
  kDimensionTooSmall,
  kFloorViolation,
  kEndMismatch,
  kZeroFittedCell,
  kNoConvergence,
  kInfeasibleMargins,
  kFiberTooLarge,
  kNoSamplesRecorded,
  kEmptyResult,
};

const char* error_code_name(ErrorCode code);

// All library failures are reported through this exception type. The code
// drives CLI exit status; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by replay and move application; carries the step at which the
// floor was breached (npos outside of a replay).
class FloorViolation : public Error {
 public:
  FloorViolation(const std::string& what, std::size_t step)
      : Error(ErrorCode::kFloorViolation, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t step_;
};

class FiberTooLarge : public Error {
 public:
  FiberTooLarge(const std::string& what, std::size_t partial_count)
      : Error(ErrorCode::kFiberTooLarge, what), partial_count_(partial_count) {}

  std::size_t partial_count() const noexcept { return partial_count_; }

 private:
  std::size_t partial_count_;
};

}  // namespace fibersampler
