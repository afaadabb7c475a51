#pragma once
#include <stdexcept>
#include <string>

namespace uavrelay {

// bad argument or out-of-range input
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// target SIR cannot be met; `cap` names the binding constraint when known
struct InfeasibleTarget : std::runtime_error {
  std::string cap;
  explicit InfeasibleTarget(const std::string& msg, std::string which = {})
      : std::runtime_error(msg), cap(std::move(which)) {}
};

struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// scenario file problems; line/column are 1-based, 0 when unknown
struct SchemaError : std::runtime_error {
  int line = 0, column = 0;
  SchemaError(const std::string& msg, int l = 0, int c = 0)
      : std::runtime_error(msg), line(l), column(c) {}
};

}  // namespace uavrelay
