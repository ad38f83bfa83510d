#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace l2tor {

inline constexpr const char* kVersion = "l2tor 0.1.0";

using Complex = std::complex<double>;

/// Coefficient blocks below this magnitude are pruned. The default keeps
/// only exact (or denormal) zeros so that certified error bounds stay valid.
inline constexpr double kExactDropTol = 1e-300;

enum class ErrorKind {
  DimensionMismatch,
  GroupMismatch,
  UndecidableCollision,
  GapNotCertified,
  ResourceBudget,
  ValidationFailure,
  SchemaViolation,
  InvalidArgument,
  EngineFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::GroupMismatch: return "group-mismatch";
    case ErrorKind::UndecidableCollision: return "undecidable-support-collision";
    case ErrorKind::GapNotCertified: return "gap-not-certified";
    case ErrorKind::ResourceBudget: return "resource-budget";
    case ErrorKind::ValidationFailure: return "validation-failure";
    case ErrorKind::SchemaViolation: return "schema-violation";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::EngineFailure: return "engine-failure";
  }
  return "unknown";
}

}  // namespace l2tor
