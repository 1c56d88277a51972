#ifndef PROTSUB_ERROR_HPP
#define PROTSUB_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace protsub {

enum class ErrorKind {
  InvalidArgument,
  ShapeMismatch,
  NotFinite,
  NotHermitian,
  NotUnitary,
  NotIsometry,
  NoConvergence,
  NotTracePreserving,
  BadWeights,
  NotStochastic,
  BadPermutation,
  LambdaOutOfRange,
  DegeneratePairMismatch,
  DegenerateSpectrum,
  ParallelChords,
  NotCommuting,
  NotNormal,
  NotFound,
  WrongKrausCount,
  NotBiasedPermutation,
  SymmetryViolated,
  OddDimension,
  NotBiunitary,
  NoCode,
  PhaseOutOfRange,
  NotDark,
  NotCompletelyDark,
  AlphaNotPSD,
  AuditFailed,
  ZeroProbabilityDraw,
  ParseError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorKind::DegeneratePairMismatch: return "DegeneratePairMismatch";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ParallelChords: return "ParallelChords";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::WrongKrausCount: return "WrongKrausCount";
    case ErrorKind::NotBiasedPermutation: return "NotBiasedPermutation";
    case ErrorKind::SymmetryViolated: return "SymmetryViolated";
    case ErrorKind::OddDimension: return "OddDimension";
    case ErrorKind::NotBiunitary: return "NotBiunitary";
    case ErrorKind::NoCode: return "NoCode";
    case ErrorKind::PhaseOutOfRange: return "PhaseOutOfRange";
    case ErrorKind::NotDark: return "NotDark";
    case ErrorKind::NotCompletelyDark: return "NotCompletelyDark";
    case ErrorKind::AlphaNotPSD: return "AlphaNotPSD";
    case ErrorKind::AuditFailed: return "AuditFailed";
    case ErrorKind::ZeroProbabilityDraw: return "ZeroProbabilityDraw";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; the
/// kind is what callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace protsub

#endif  // PROTSUB_ERROR_HPP
