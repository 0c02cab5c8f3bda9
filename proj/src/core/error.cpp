#include "wisard/error.hpp"

namespace wisard {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::EmptyLabel: return "empty_label";
    case ErrorCode::UnknownLabel: return "unknown_label";
    case ErrorCode::IndexOutOfBounds: return "index_out_of_bounds";
    case ErrorCode::VersionMismatch: return "version_mismatch";
    case ErrorCode::MalformedDocument: return "malformed_document";
    case ErrorCode::InvariantViolation: return "invariant_violation";
    case ErrorCode::MalformedImage: return "malformed_image";
    case ErrorCode::TruncatedImage: return "truncated_image";
    case ErrorCode::UnsupportedMaxval: return "unsupported_maxval";
    case ErrorCode::Io: return "io_error";
  }
  return "unknown_error";
}

}  // namespace wisard
