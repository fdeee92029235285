#pragma once

#include <stdexcept>
#include <string>

namespace ringsqueeze {

/// Failure classes; each maps onto one CLI exit code.
enum class ErrorKind {
  kConfig = 2,     ///< invalid or inconsistent parameters, bad config files
  kSolver = 3,     ///< numerical accuracy or resolution failures
  kPhysics = 4,    ///< violated physical invariant (upstream bug)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const { return kind_; }
  /// Short machine-readable identifier, e.g. "invalid-parameter".
  const std::string& code() const { return code_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
  std::string code_;
};

inline Error invalid_parameter(const std::string& what) {
  return Error(ErrorKind::kConfig, "invalid-parameter", what);
}

inline Error solver_error(const std::string& code, const std::string& what) {
  return Error(ErrorKind::kSolver, code, what);
}

inline Error physics_error(const std::string& code, const std::string& what) {
  return Error(ErrorKind::kPhysics, code, what);
}

}  // namespace ringsqueeze
