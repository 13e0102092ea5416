#pragma once

#include <stdexcept>
#include <string>

namespace fiberpol {

/// Broad failure class, used by the CLI to pick an exit code.
enum class ErrorKind { Domain, Convergence };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define FIBERPOL_DOMAIN_ERROR(Name)                                                     \
  class Name : public Error {                                                           \
   public:                                                                              \
    explicit Name(const std::string& what) : Error(ErrorKind::Domain, #Name ": " + what) {} \
  }

#define FIBERPOL_CONVERGENCE_ERROR(Name)                                                     \
  class Name : public Error {                                                                \
   public:                                                                                   \
    explicit Name(const std::string& what) : Error(ErrorKind::Convergence, #Name ": " + what) {} \
  }

FIBERPOL_DOMAIN_ERROR(DomainError);
FIBERPOL_DOMAIN_ERROR(PoleError);
FIBERPOL_DOMAIN_ERROR(SingularMass);
FIBERPOL_DOMAIN_ERROR(ConfigError);
FIBERPOL_DOMAIN_ERROR(NoBracket);
FIBERPOL_DOMAIN_ERROR(RegimeError);
FIBERPOL_DOMAIN_ERROR(EmptyBoundary);
FIBERPOL_DOMAIN_ERROR(DimensionOverflow);
FIBERPOL_DOMAIN_ERROR(NoCrossing);
FIBERPOL_DOMAIN_ERROR(ParseError);
FIBERPOL_DOMAIN_ERROR(UnknownKey);

FIBERPOL_CONVERGENCE_ERROR(NoConvergence);
FIBERPOL_CONVERGENCE_ERROR(BlowUp);
FIBERPOL_CONVERGENCE_ERROR(NonFinite);

#undef FIBERPOL_DOMAIN_ERROR
#undef FIBERPOL_CONVERGENCE_ERROR

}  // namespace fiberpol
