#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace provenance_atlas {

enum class ErrorCode {
  MalformedDocument,
  MalformedGazetteer,
  InvalidBucket,
  InvalidLevel,
  InvalidParams,
  DegenerateSegment,
  UnknownLabel,
  NotFound,
  NoMappablePath,
  InvalidRequest,
  BindFailure,
  ValidationFailed,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MALFORMED_DOCUMENT";
    case ErrorCode::MalformedGazetteer: return "MALFORMED_GAZETTEER";
    case ErrorCode::InvalidBucket: return "INVALID_BUCKET";
    case ErrorCode::InvalidLevel: return "INVALID_LEVEL";
    case ErrorCode::InvalidParams: return "INVALID_PARAMS";
    case ErrorCode::DegenerateSegment: return "DEGENERATE_SEGMENT";
    case ErrorCode::UnknownLabel: return "UNKNOWN_LABEL";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::NoMappablePath: return "NO_MAPPABLE_PATH";
    case ErrorCode::InvalidRequest: return "INVALID_REQUEST";
    case ErrorCode::BindFailure: return "BIND_FAILURE";
    case ErrorCode::ValidationFailed: return "VALIDATION_FAILED";
    case ErrorCode::Io: return "IO_ERROR";
  }
  return "UNKNOWN";
}

// Operation failure carrying a stable machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const noexcept { return to_string(code_); }

 private:
  ErrorCode code_;
};

}  // namespace provenance_atlas
