#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace wedgedrag {

/// A configuration value violates its invariant. `field()` names the offending key.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Adaptive quadrature exhausted its subdivision budget before meeting tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double residual)
        : std::runtime_error(what), estimate_(estimate), residual_(residual) {}
    double estimate() const noexcept { return estimate_; }
    double residual() const noexcept { return residual_; }

private:
    double estimate_;
    double residual_;
};

/// A caller broke an operation's precondition (e.g. tracing an outgoing velocity).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Monte Carlo estimation could not be carried out (e.g. an empty eta stratum).
class EstimationError : public std::runtime_error {
public:
    EstimationError(const std::string& what, std::size_t stratum)
        : std::runtime_error(what), stratum_(stratum) {}
    std::size_t stratum() const noexcept { return stratum_; }

private:
    std::size_t stratum_;
};

/// The time derivative of the recollision deficit failed to be strictly positive somewhere.
class ObstructionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root bracketing for the limiting velocity ran past the velocity cap.
class UnboundedVelocityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The limiting-velocity residual was not strictly decreasing across the bracket.
class NonMonotoneResidualError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The decay fit has too few usable points above the noise floor.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wedgedrag
