#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace forkimpact {

enum class ErrorCode {
  NoOverlap,
  FrameMismatch,
  MalformedHeader,
  MalformedRow,
  NonMonotoneTimestamps,
  UnknownUnit,
  UnknownNode,
  MissingNode,
  InvalidValue,
  NotStationary,
  TiltOutOfRange,
  InsufficientMotion,
  EmptySegment,
  DutyOverflow,
  Unachievable,
  OverlappingSpecs,
  UnknownParameter,
  Io,
};

constexpr std::string_view to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::NoOverlap: return "NoOverlap";
    case ErrorCode::FrameMismatch: return "FrameMismatch";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::NonMonotoneTimestamps: return "NonMonotoneTimestamps";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::MissingNode: return "MissingNode";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::NotStationary: return "NotStationary";
    case ErrorCode::TiltOutOfRange: return "TiltOutOfRange";
    case ErrorCode::InsufficientMotion: return "InsufficientMotion";
    case ErrorCode::EmptySegment: return "EmptySegment";
    case ErrorCode::DutyOverflow: return "DutyOverflow";
    case ErrorCode::Unachievable: return "Unachievable";
    case ErrorCode::OverlappingSpecs: return "OverlappingSpecs";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace forkimpact
