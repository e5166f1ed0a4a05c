#pragma once

#include <stdexcept>
#include <string>

namespace spotdag {

// Raised for malformed precedence structure (cycles, dangling edges).
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A window or job horizon too small to hold the minimum execution time.
class InfeasibleWindow : public std::invalid_argument {
 public:
  InfeasibleWindow(const std::string& what, double deficit)
      : std::invalid_argument(what), deficit_(deficit) {}

  double deficit() const { return deficit_; }

 private:
  double deficit_;
};

// Querying a price trace beyond its last slot.
class HorizonError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Operations invoked out of order (slot outside a window, update before t > d).
class SequencingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Argument outside the domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Runtime state that the accounting rules should make unreachable.
class InconsistentState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace spotdag
