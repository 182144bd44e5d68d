#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tgk {

// Broad failure classes. The numeric value doubles as the CLI exit code.
enum class ErrorCategory : int {
  config = 1,
  domain = 2,
  numeric = 3,
  ill_posed = 4,
  io = 5,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string kind, const std::string& message)
      : std::runtime_error(message), category_(category), kind_(std::move(kind)) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }
  const std::string& kind() const noexcept { return kind_; }

 private:
  ErrorCategory category_;
  std::string kind_;
};

#define TGK_DEFINE_ERROR(Name, Category)                                  \
  class Name : public Error {                                             \
   public:                                                                \
    explicit Name(const std::string& message)                             \
        : Error(ErrorCategory::Category, #Name, message) {}               \
  };

TGK_DEFINE_ERROR(ConfigError, config)
TGK_DEFINE_ERROR(DomainError, domain)
TGK_DEFINE_ERROR(PoleError, domain)
TGK_DEFINE_ERROR(InvalidParams, domain)
TGK_DEFINE_ERROR(ResolutionError, domain)
TGK_DEFINE_ERROR(BoundarySupportError, domain)
TGK_DEFINE_ERROR(NegativeSymbolError, domain)
TGK_DEFINE_ERROR(SeedRegimeError, domain)
TGK_DEFINE_ERROR(PrecisionError, numeric)
TGK_DEFINE_ERROR(StiffnessError, numeric)
TGK_DEFINE_ERROR(IllPosedDecay, ill_posed)
TGK_DEFINE_ERROR(IoError, io)

#undef TGK_DEFINE_ERROR

// Thrown when a series result leaves the double range. Carries ln|value| so
// callers can still report the magnitude.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& message, double log_magnitude)
      : Error(ErrorCategory::numeric, "OverflowError", message),
        log_magnitude_(log_magnitude) {}

  double log_magnitude() const noexcept { return log_magnitude_; }

 private:
  double log_magnitude_;
};

// Non-fatal diagnostics (near-singular Bessel arguments, quadrature tails).
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) sink->push_back(std::move(message));
}

}  // namespace tgk
