#pragma once

#include <stdexcept>
#include <string>

namespace bimodal {

/// Broad failure classes. The CLI maps these onto exit codes.
enum class ErrorKind {
  kDomain,       // argument outside the mathematical domain of an operation
  kValidation,   // malformed network or scenario
  kFeasibility,  // problem has no feasible point
  kSolver,       // numerical failure or non-convergence
  kIo,           // file access or parse failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error DomainError(const std::string& what) { return {ErrorKind::kDomain, what}; }
inline Error ValidationError(const std::string& what) { return {ErrorKind::kValidation, what}; }
inline Error FeasibilityError(const std::string& what) { return {ErrorKind::kFeasibility, what}; }
inline Error SolverError(const std::string& what) { return {ErrorKind::kSolver, what}; }
inline Error IoError(const std::string& what) { return {ErrorKind::kIo, what}; }

}  // namespace bimodal
