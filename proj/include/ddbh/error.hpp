#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddbh {

enum class ErrorCode {
  PoleHit,
  NoConvergence,
  DegenerateCubic,
  NoneFound,
  G2Undefined,
  TruncationTooSmall,
  TruncationCeiling,
  DegenerateKernel,
  XiOutOfRange,
  NearResonance,
  AtCriticalCoupling,
  StepTooLarge,
  EigenFailure,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateCubic: return "DegenerateCubic";
    case ErrorCode::NoneFound: return "NoneFound";
    case ErrorCode::G2Undefined: return "G2Undefined";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::TruncationCeiling: return "TruncationCeiling";
    case ErrorCode::DegenerateKernel: return "DegenerateKernel";
    case ErrorCode::XiOutOfRange: return "XiOutOfRange";
    case ErrorCode::NearResonance: return "NearResonance";
    case ErrorCode::AtCriticalCoupling: return "AtCriticalCoupling";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ddbh
