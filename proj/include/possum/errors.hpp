#pragma once

#include <stdexcept>
#include <string>

namespace possum {

// Exit-code family used by the CLI.
enum class ErrorCategory { Infeasible, Input, Numerical };

class Error : public std::runtime_error {
 public:
  Error(const char* kind, ErrorCategory category, const std::string& message)
      : std::runtime_error(message), kind_(kind), category_(category) {}

  const char* kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_; }

 private:
  const char* kind_;
  ErrorCategory category_;
};

#define POSSUM_DEFINE_ERROR(Name, Category)                       \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& message)                     \
        : Error(#Name, ErrorCategory::Category, message) {}       \
  };

POSSUM_DEFINE_ERROR(InvalidArgument, Input)
POSSUM_DEFINE_ERROR(DimensionMismatch, Input)
POSSUM_DEFINE_ERROR(OutsideDomain, Input)
POSSUM_DEFINE_ERROR(DegreeOverflow, Input)
POSSUM_DEFINE_ERROR(ParseError, Input)
POSSUM_DEFINE_ERROR(CertificateInfeasible, Infeasible)
POSSUM_DEFINE_ERROR(LambdaTooSmall, Infeasible)
POSSUM_DEFINE_ERROR(ConditioningFailure, Numerical)
POSSUM_DEFINE_ERROR(SingularEigenvalue, Numerical)

#undef POSSUM_DEFINE_ERROR

}  // namespace possum
