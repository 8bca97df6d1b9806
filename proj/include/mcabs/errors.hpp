#pragma once

#include <stdexcept>
#include <string>

namespace mcabs {

// Shape disagreement between operands (empty matrix, mismatched factor sizes).
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A value outside its admissible domain (negative tolerance, k > n, ...).
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Unreadable or malformed file content; messages name the offending line.
class FormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Raised when an optimization run produces non-finite values or the
// objective explodes. Carries the iteration at which it was detected.
class DivergenceError : public std::runtime_error {
  public:
    DivergenceError(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    int iteration() const { return iteration_; }

  private:
    int iteration_;
};

}  // namespace mcabs
