#ifndef TASNSC_ERROR_HPP_
#define TASNSC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace tasnsc {

enum class ErrorCode {
  kDegenerateDirection,
  kTooShortTrajectory,
  kInsufficientDuration,
  kNonUniformTimestamps,
  kDegenerateMotion,
  kEmptyTrajectory,
  kDimensionMismatch,
  kInvalidArgument,
  kNotPositiveDefinite,
  kEmptySequence,
  kZeroDisplacement,
  kInvalidProportions,
  kEmptyDataset,
  kNoPattern,
  kParse,
  kIo,
};

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Configuration problems (bad files, bad values) as opposed to failures
  /// of the numerical pipeline itself.
  bool is_configuration() const noexcept {
    return code_ == ErrorCode::kParse || code_ == ErrorCode::kIo ||
           code_ == ErrorCode::kInvalidArgument ||
           code_ == ErrorCode::kInvalidProportions ||
           code_ == ErrorCode::kDegenerateDirection;
  }

 private:
  ErrorCode code_;
};

}  // namespace tasnsc

#endif  // TASNSC_ERROR_HPP_
