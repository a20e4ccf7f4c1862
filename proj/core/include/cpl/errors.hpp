#pragma once

#include <stdexcept>
#include <string>

namespace cpl {

enum class ErrorCode {
  NotInterior,        // 0 is not an interior point where it must be
  Unbounded,          // halfspace intersection is not a bounded body
  DegenerateBody,     // affine hull has dimension < ambient dimension
  NotNested,          // D not contained in B where required
  NotSymmetric,       // body required to be origin-symmetric is not
  NonPositive,        // positive real argument was <= 0
  ContainmentViolated,// sampled body escaped its stated reference
  Singular,           // linear map numerically singular
  Stall,              // iteration cannot make progress
  DegenerateSection,  // section empty for all probed shifts
  CertificateFailed,  // a structural certificate did not hold
  ParseError,         // malformed body / suite file
  Unsupported,        // representation does not support the operation
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::DegenerateBody: return "DegenerateBody";
    case ErrorCode::NotNested: return "NotNested";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NonPositive: return "NonPositive";
    case ErrorCode::ContainmentViolated: return "ContainmentViolated";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::Stall: return "StallError";
    case ErrorCode::DegenerateSection: return "DegenerateSection";
    case ErrorCode::CertificateFailed: return "CertificateFailed";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(error_name(code)) + ": " + what);
}

}  // namespace cpl
