#pragma once

#include <stdexcept>
#include <string>

namespace nnsr {

/// Dimension disagreement between operands (or an invalid dimension).
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed (SVD non-convergence, bisection bracket loss,
/// violated internal invariant).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A solve produced a non-finite iterate. Carries the iteration index.
struct DivergenceError : NumericError {
  DivergenceError(const std::string& what, int iteration)
      : NumericError(what), iteration(iteration) {}
  int iteration;
};

/// Malformed input file (CSV, PNM).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nnsr
