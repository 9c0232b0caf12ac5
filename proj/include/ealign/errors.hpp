#pragma once

#include <stdexcept>
#include <string>

namespace ealign {

// Loss of pointwise admissibility (vacuum, nonpositive sound-speed shift).
struct AdmissibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// NaN/Inf in evolved fields or a violated runtime monitor.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ealign
