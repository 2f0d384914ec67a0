#ifndef QBATTERY_ERRORS_HPP
#define QBATTERY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbattery {

/// Input rejected before any numerics ran (bad parameters, non-finite
/// band-map output, malformed configuration).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mode where the pre-quench or evolution Hamiltonian vanishes, so the
/// stored-energy kernel is undefined there.
class DegenerateModeError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A quantity that is only defined off a quantum critical point was
/// requested at (or too close to) one.
class CriticalityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Numerical failure during a computation that had valid inputs.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbattery

#endif  // QBATTERY_ERRORS_HPP
