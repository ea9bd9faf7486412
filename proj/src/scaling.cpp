#include "jacobi_rare/scaling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "jacobi_rare/error.hpp"

namespace jrare {

namespace {

double x_scale(const EnsembleParams& params) noexcept {
    return std::sqrt(static_cast<double>(params.n()) * params.p1());
}

}  // namespace

std::string_view to_string(Coordinate c) {
    switch (c) {
        case Coordinate::Lambda: return "lambda";
        case Coordinate::X: return "x";
        case Coordinate::Z: return "z";
    }
    return "unknown";
}

Coordinate parse_coordinate(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "lambda") return Coordinate::Lambda;
    if (lower == "x") return Coordinate::X;
    if (lower == "z") return Coordinate::Z;
    throw ParameterError("unknown coordinate '" + std::string(text) + "' (expected lambda, x or z)");
}

double lambda_to_x(double lambda, const EnsembleParams& params) noexcept {
    return (params.p() * lambda - params.p1()) / x_scale(params);
}

double x_to_lambda(double x, const EnsembleParams& params) noexcept {
    return (params.p1() + x_scale(params) * x) / params.p();
}

double lambda_to_z(double lambda, const EnsembleParams& params) noexcept {
    return params.p() * lambda / params.p1();
}

double z_to_lambda(double z, const EnsembleParams& params) noexcept {
    return z * params.p1() / params.p();
}

double x_to_z(double x, const EnsembleParams& params) noexcept {
    return 1.0 + std::sqrt(static_cast<double>(params.n()) / params.p1()) * x;
}

double z_to_x(double z, const EnsembleParams& params) noexcept {
    return (z - 1.0) / std::sqrt(static_cast<double>(params.n()) / params.p1());
}

double convert(double value, Coordinate from, Coordinate to, const EnsembleParams& params) noexcept {
    if (from == to) return value;
    switch (from) {
        case Coordinate::Lambda:
            return to == Coordinate::X ? lambda_to_x(value, params) : lambda_to_z(value, params);
        case Coordinate::X:
            return to == Coordinate::Lambda ? x_to_lambda(value, params) : x_to_z(value, params);
        case Coordinate::Z:
            return to == Coordinate::Lambda ? z_to_lambda(value, params) : z_to_x(value, params);
    }
    return value;
}

double lambda_threshold_to_x(double x_lambda, const EnsembleParams& params) {
    if (!(x_lambda > 0.0 && x_lambda < 1.0)) {
        std::ostringstream msg;
        msg << "lambda threshold must lie in (0, 1), got " << x_lambda;
        throw DomainError(msg.str());
    }
    return lambda_to_x(x_lambda, params);
}

double threshold_in_x(const Threshold& t, const EnsembleParams& params) {
    if (t.coordinate == Coordinate::Lambda) {
        return lambda_threshold_to_x(t.value, params);
    }
    return convert(t.value, t.coordinate, Coordinate::X, params);
}

OrderedSpectrum to_coordinate(const OrderedSpectrum& s, Coordinate target, const EnsembleParams& params) {
    OrderedSpectrum out;
    out.coordinate = target;
    out.values.reserve(s.values.size());
    for (double v : s.values) {
        out.values.push_back(convert(v, s.coordinate, target, params));
    }
    return out;
}

OrderedSpectrum lambda_to_x(const OrderedSpectrum& s, const EnsembleParams& params) {
    return to_coordinate(s, Coordinate::X, params);
}

OrderedSpectrum x_to_lambda(const OrderedSpectrum& s, const EnsembleParams& params) {
    return to_coordinate(s, Coordinate::Lambda, params);
}

OrderedSpectrum lambda_to_z(const OrderedSpectrum& s, const EnsembleParams& params) {
    return to_coordinate(s, Coordinate::Z, params);
}

}  // namespace jrare
