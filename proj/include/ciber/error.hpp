#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ciber {

enum class ErrorCode {
  InvalidArgument,
  Io,
  MissingTarget,
  NonRectangular,
  EmptyData,
  MissingValue,
  ClassTooSmall,
  TooFewRows,
  SingleClass,
  ConstantColumn,
  ZeroVariance,
  UnknownClass,
  DimensionMismatch,
  CorruptModel,
  VersionMismatch,
  TooFewRepeats,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::NonRectangular: return "NonRectangular";
    case ErrorCode::EmptyData: return "EmptyData";
    case ErrorCode::MissingValue: return "MissingValue";
    case ErrorCode::ClassTooSmall: return "ClassTooSmall";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::ConstantColumn: return "ConstantColumn";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::CorruptModel: return "CorruptModel";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::TooFewRepeats: return "TooFewRepeats";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ciber
