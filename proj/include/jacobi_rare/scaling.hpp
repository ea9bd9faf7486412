#pragma once

#include <string_view>

#include "jacobi_rare/ensemble.hpp"

namespace jrare {

// Affine coordinate systems for eigenvalues and thresholds:
//   X = (p λ − p1)/√(n p1),   Z = p λ / p1 = 1 + √(n/p1) X.

std::string_view to_string(Coordinate c);
/// Parses "lambda", "x" or "z" (case-insensitive). Throws ParameterError.
Coordinate parse_coordinate(std::string_view text);

struct Threshold {
    double value = 0.0;
    Coordinate coordinate = Coordinate::X;
};

double lambda_to_x(double lambda, const EnsembleParams& params) noexcept;
double x_to_lambda(double x, const EnsembleParams& params) noexcept;
double lambda_to_z(double lambda, const EnsembleParams& params) noexcept;
double z_to_lambda(double z, const EnsembleParams& params) noexcept;
double x_to_z(double x, const EnsembleParams& params) noexcept;
double z_to_x(double z, const EnsembleParams& params) noexcept;

/// Maps a single value between any two coordinate systems.
double convert(double value, Coordinate from, Coordinate to, const EnsembleParams& params) noexcept;

/// (p x_λ − p1)/√(n p1). Throws DomainError unless 0 < x_λ < 1.
double lambda_threshold_to_x(double x_lambda, const EnsembleParams& params);

/// Threshold in X coordinates, whatever coordinate it was given in.
double threshold_in_x(const Threshold& t, const EnsembleParams& params);

/// Re-expresses a whole spectrum; the maps are increasing so order is kept.
OrderedSpectrum to_coordinate(const OrderedSpectrum& s, Coordinate target, const EnsembleParams& params);

OrderedSpectrum lambda_to_x(const OrderedSpectrum& s, const EnsembleParams& params);
OrderedSpectrum x_to_lambda(const OrderedSpectrum& s, const EnsembleParams& params);
OrderedSpectrum lambda_to_z(const OrderedSpectrum& s, const EnsembleParams& params);

}  // namespace jrare
