#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polya {

enum class Errc {
  InvalidParameter,
  IncompatibleGrids,
  GridMismatch,
  OutOfDomain,
  NegativeValue,
  NotPeriodic,
  NotIndicator,
  SigmaOutOfRange,
  StepFunctionDivergence,
  ToleranceNotMet,
  NonpositiveTime,
  RangeTooWide,
  UnknownName,
  NotNormalized,
  NotAttained,
  DivergentTail,
  KernelNotMonotone,
  BudgetExceeded,
  ConfigError,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace polya
