#pragma once

#include <stdexcept>
#include <string>

namespace queuetail {

/// Input violates a documented invariant (bad PMF, eps outside (0,1), ...).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument lies outside the region where a formula is defined or finite.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The system is valid but degenerate for the requested quantity (e.g. zero variance).
class DegenerateSystemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A stationary solver found no geometric decay within its state budget.
class InstabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical routine failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// Statistical estimation impossible on the supplied data.
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace queuetail
