#pragma once

#include <stdexcept>
#include <string>

namespace qplane {

enum class ErrorKind {
  InvalidParameter,
  DomainError,
  NonConvergent,
  DivergentSeries,
  PoleInParameters,
  WindowTooSmall,
  OutOfWindow,
  BranchCut,
  NoValidBranch,
  ConvergenceViolation,
  ZeroArgument,
  Io,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::DivergentSeries: return "DivergentSeries";
    case ErrorKind::PoleInParameters: return "PoleInParameters";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::BranchCut: return "BranchCut";
    case ErrorKind::NoValidBranch: return "NoValidBranch";
    case ErrorKind::ConvergenceViolation: return "ConvergenceViolation";
    case ErrorKind::ZeroArgument: return "ZeroArgument";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// Usage-type failures (bad parameters) as opposed to numerical ones.
  bool is_parameter_error() const noexcept {
    return kind_ == ErrorKind::InvalidParameter || kind_ == ErrorKind::DomainError ||
           kind_ == ErrorKind::ConvergenceViolation || kind_ == ErrorKind::ZeroArgument ||
           kind_ == ErrorKind::BranchCut || kind_ == ErrorKind::Io;
  }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace qplane
