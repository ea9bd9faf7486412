#include "jacobi_rare/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "jacobi_rare/error.hpp"

namespace jrare {

namespace {

constexpr double kLanczosG = 607.0 / 128.0;

// Godfrey's coefficients for g = 607/128, 15 terms.
constexpr std::array<double, 15> kLanczosCoef = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

double lanczos_log_gamma(double x) {
    const double z = x - 1.0;
    double sum = kLanczosCoef[0];
    for (std::size_t k = 1; k < kLanczosCoef.size(); ++k) {
        sum += kLanczosCoef[k] / (z + static_cast<double>(k));
    }
    const double t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(sum);
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ParameterError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    if (x == 1.0 || x == 2.0) {
        return 0.0;
    }
    if (x < 0.5) {
        // Γ(x) = Γ(x+1)/x keeps the series in its accurate range.
        return lanczos_log_gamma(x + 1.0) - std::log(x);
    }
    return lanczos_log_gamma(x);
}

}  // namespace jrare
