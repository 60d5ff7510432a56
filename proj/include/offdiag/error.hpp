#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace offdiag {

enum class ErrorCode {
  InvalidArgument,
  NonFinite,
  NotSquare,
  DimensionMismatch,
  NotNormal,
  NoConvergence,
  RankDeficient,
  FullOrZeroRank,
  NotUnitary,
  PivotSingular,
  PivotNotSquare,
  Singular,
  CoincidentPoints,
  PoleOnSpectrum,
  EmptyInput,
  NotCirclinear,
  NotUnimodular,
  BetaReal,
  DeltaReal,
  DeltaDegenerate,
  VerificationFailed,
  ZeroVector,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::FullOrZeroRank: return "FullOrZeroRank";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::PivotSingular: return "PivotSingular";
    case ErrorCode::PivotNotSquare: return "PivotNotSquare";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::PoleOnSpectrum: return "PoleOnSpectrum";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotCirclinear: return "NotCirclinear";
    case ErrorCode::NotUnimodular: return "NotUnimodular";
    case ErrorCode::BetaReal: return "BetaReal";
    case ErrorCode::DeltaReal: return "DeltaReal";
    case ErrorCode::DeltaDegenerate: return "DeltaDegenerate";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace offdiag
