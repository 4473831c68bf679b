#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace masep {

enum class ErrorKind {
  InvalidDimension,
  SingularMatrix,
  SpectralPole,
  DegenerateRates,
  DegenerateQ,
  InvalidSpecies,
  InvalidSpec,
  NonMarkovian,
  SingularConjugation,
  DimensionCapExceeded,
  InvalidComparison,
  InvalidRational,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::SpectralPole: return "SpectralPole";
    case ErrorKind::DegenerateRates: return "DegenerateRates";
    case ErrorKind::DegenerateQ: return "DegenerateQ";
    case ErrorKind::InvalidSpecies: return "InvalidSpecies";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::NonMarkovian: return "NonMarkovian";
    case ErrorKind::SingularConjugation: return "SingularConjugation";
    case ErrorKind::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorKind::InvalidComparison: return "InvalidComparison";
    case ErrorKind::InvalidRational: return "InvalidRational";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace masep
