#ifndef CSTAR_ERROR_HPP
#define CSTAR_ERROR_HPP

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cstar {

namespace detail {
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}
}  // namespace detail

enum class ErrorKind {
  NotSquare,
  NonFinite,
  DimensionMismatch,
  NotHermitian,
  NotNormal,
  NotPSD,
  Singular,
  InvalidTolerance,
  CenterDegenerate,
  CouldNotInvert,
  NotMember,
  InvalidDeformation,
  NoUnit,
  NotDeformation,
  CenterTrivial,
  InvalidInput,
  Internal,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::CenterDegenerate: return "CenterDegenerate";
    case ErrorKind::CouldNotInvert: return "CouldNotInvert";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::InvalidDeformation: return "InvalidDeformation";
    case ErrorKind::NoUnit: return "NoUnit";
    case ErrorKind::NotDeformation: return "NotDeformation";
    case ErrorKind::CenterTrivial: return "CenterTrivial";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

/// Every failure raised by the library. The kind is stable and is what
/// callers (and the CLI exit-code mapping) dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cstar

#endif  // CSTAR_ERROR_HPP
