#pragma once

#include <stdexcept>
#include <string>

namespace credinfo {

// Invalid arguments are reported with std::invalid_argument throughout.

/// A numerical routine failed to reach its accuracy target (quadrature
/// non-convergence, overflow in a stochastic exponential, empty weights).
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The input lies outside the region where the model is defined, e.g. the
/// signal density evaluated at or after the signal horizon.
class DomainViolation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace credinfo
