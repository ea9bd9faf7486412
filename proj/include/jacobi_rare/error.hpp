#pragma once

#include <stdexcept>
#include <string>

namespace jrare {

/// Invalid model or estimator parameters (nonpositive shapes, p < n, ...).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Limit parameters outside assumption A (γσ ≥ 1, or γ = 1 with σ > 0).
class RegimeError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Argument outside the natural domain of a function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iteration caps, quadrature non-convergence and similar failures.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sample that breaks an invariant the construction guarantees in exact arithmetic.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace jrare
