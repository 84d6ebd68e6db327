#pragma once

#include <stdexcept>
#include <string>

namespace cagvrp {

// Malformed input file. The message carries line/column context when the
// underlying parser provides it.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (e.g. fed a fractional vector to
// decode, or asked to branch on an integral point).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An integral point that passes the static rows but does not describe a
// CAGVRP tour: some cut was missed upstream.
class InfeasibleDecode : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cagvrp
