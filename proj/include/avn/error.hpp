#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace avn {

enum class ErrorKind {
  InvalidArgument,
  NotFinite,
  NotHermitian,
  NotPositive,
  TraceNotOne,
  NotUnit,
  ConditionalsNotPure,
  ConditionalsIdentical,
  ZeroProbabilityOutcome,
  MZero,
  DegenerateSettings,
  InconsistentAssemblage,
  BudgetExceeded,
  DuplicateDirection,
  ParseError,
};

const char* to_string(ErrorKind kind);

// Every library failure carries a kind plus the measured quantity that
// tripped it (residual, purity deficit, ...), or NaN when there is none.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double measured = std::numeric_limits<double>::quiet_NaN());

  ErrorKind kind() const noexcept { return kind_; }
  double measured() const noexcept { return measured_; }

 private:
  ErrorKind kind_;
  double measured_;
};

}  // namespace avn
