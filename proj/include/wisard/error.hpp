#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wisard {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptyLabel,
  UnknownLabel,
  IndexOutOfBounds,
  VersionMismatch,
  MalformedDocument,
  InvariantViolation,
  MalformedImage,
  TruncatedImage,
  UnsupportedMaxval,
  Io,
};

/// Stable machine-readable name, e.g. "dimension_mismatch".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wisard
