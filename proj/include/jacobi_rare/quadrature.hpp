#pragma once

#include <cstddef>
#include <functional>

namespace jrare {

struct QuadratureConfig {
    double abs_tol = 1e-13;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 4000;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    std::size_t intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod on the finite interval [a, b].
/// Bisects the interval with the largest error estimate until the total error
/// drops below max(abs_tol, rel_tol·|value|). Throws NumericalError if the
/// interval budget runs out first.
QuadratureResult integrate_gk15(const std::function<double(double)>& f, double a, double b,
                                const QuadratureConfig& cfg = {});

}  // namespace jrare
