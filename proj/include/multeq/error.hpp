#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace multeq {

enum class ErrorKind {
  NonPrimeModulus,
  ReduciblePolynomial,
  SingularBasis,
  ParameterTooLarge,
  ZeroInverse,
  SideExceedsModulus,
  SetTooLarge,
  DegenerateOmega,
  RankExceedsModulus,
  RadiusTooSmall,
  BudgetExceeded,
  CertificateViolation,
  ImproperHypothesis,
  KernelConditionFails,
  InvalidArgument,
  Overflow,
  InternalError,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorKind::ReduciblePolynomial: return "ReduciblePolynomial";
    case ErrorKind::SingularBasis: return "SingularBasis";
    case ErrorKind::ParameterTooLarge: return "ParameterTooLarge";
    case ErrorKind::ZeroInverse: return "ZeroInverse";
    case ErrorKind::SideExceedsModulus: return "SideExceedsModulus";
    case ErrorKind::SetTooLarge: return "SetTooLarge";
    case ErrorKind::DegenerateOmega: return "DegenerateOmega";
    case ErrorKind::RankExceedsModulus: return "RankExceedsModulus";
    case ErrorKind::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::CertificateViolation: return "CertificateViolation";
    case ErrorKind::ImproperHypothesis: return "ImproperHypothesis";
    case ErrorKind::KernelConditionFails: return "KernelConditionFails";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InternalError: return "InternalError";
  }
  return "Unknown";
}

/// Library-wide exception. `kind()` identifies the failure class so callers
/// can react (e.g. retry successive_minima with a larger radius).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace multeq
