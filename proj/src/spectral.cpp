#include "jacobi_rare/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "jacobi_rare/error.hpp"

namespace jrare {

namespace {

constexpr double kPi = std::numbers::pi;

double sqrt_pos(double v) { return std::sqrt(std::max(v, 0.0)); }

// (1 + √γ x)(1 − σ√γ x), the common denominator of J′, I′ and S̃.
template <typename T>
T edge_denominator(T x, const LimitRegime& r) {
    const double sg = std::sqrt(r.gamma());
    return (1.0 + sg * x) * (1.0 - r.sigma() * sg * x);
}

double wachter_density(double t, double gamma, double sigma, double u1, double u2) {
    if (t <= u1 || t >= u2) return 0.0;
    return (1.0 + sigma) / (2.0 * kPi * sigma * gamma) * sqrt_pos((t - u1) * (u2 - t)) / (t * (1.0 - t));
}

double marchenko_pastur_density(double t, double gamma) {
    const double sg = std::sqrt(gamma);
    const double lo = (sg - 1.0) * (sg - 1.0);
    const double hi = (sg + 1.0) * (sg + 1.0);
    if (t <= lo || t >= hi) return 0.0;
    return sqrt_pos((t - lo) * (hi - t)) / (2.0 * kPi * gamma * t);
}

// c_α(x) = √(2α − x²)/(πα)
double semicircle_density(double x, double alpha) {
    const double r2 = 2.0 * alpha;
    if (x * x >= r2) return 0.0;
    return sqrt_pos(r2 - x * x) / (kPi * alpha);
}

}  // namespace

std::string_view to_string(RegimeCase c) {
    switch (c) {
        case RegimeCase::Interior: return "interior";
        case RegimeCase::SigmaZero: return "sigma-zero";
        case RegimeCase::GammaZero: return "gamma-zero";
    }
    return "unknown";
}

LimitRegime LimitRegime::make(double gamma, double sigma) {
    std::ostringstream msg;
    if (!(gamma >= 0.0 && gamma <= 1.0) || !(sigma >= 0.0) || !std::isfinite(sigma)) {
        msg << "limit regime needs gamma in [0, 1] and finite sigma >= 0, got gamma = " << gamma
            << ", sigma = " << sigma;
        throw RegimeError(msg.str());
    }
    if (gamma == 0.0) {
        return LimitRegime(gamma, sigma, RegimeCase::GammaZero);
    }
    if (sigma == 0.0) {
        return LimitRegime(gamma, sigma, RegimeCase::SigmaZero);
    }
    if (gamma * sigma >= 1.0 || gamma >= 1.0) {
        msg << "limit regime outside assumption A: need gamma < min(1, 1/sigma), got gamma = " << gamma
            << ", sigma = " << sigma << " (gamma*sigma = " << gamma * sigma << ")";
        throw RegimeError(msg.str());
    }
    return LimitRegime(gamma, sigma, RegimeCase::Interior);
}

double LimitRegime::domain_lower() const noexcept {
    if (gamma_ == 0.0) return -std::numeric_limits<double>::infinity();
    return -1.0 / std::sqrt(gamma_);
}

double LimitRegime::domain_upper() const noexcept {
    if (gamma_ * sigma_ == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (std::sqrt(gamma_) * sigma_);
}

LimitRegime limit_regime(const EnsembleParams& params, double threshold) {
    const double ratio_gamma = static_cast<double>(params.n()) / params.p1();
    const double ratio_sigma = params.p1() / params.p2();
    const double gamma = ratio_gamma > threshold ? ratio_gamma : 0.0;
    const double sigma = ratio_sigma > threshold ? ratio_sigma : 0.0;
    return LimitRegime::make(gamma, sigma);
}

SupportEdges support_edges(const LimitRegime& regime) {
    const double g = regime.gamma();
    const double s = regime.sigma();
    const double shift = (1.0 - s) * std::sqrt(g);
    const double spread = 2.0 * std::sqrt(1.0 + s - s * g);
    SupportEdges e{};
    e.u_tilde_1 = (shift - spread) / (1.0 + s);
    e.u_tilde_2 = (shift + spread) / (1.0 + s);
    if (g * s > 0.0) {
        const double a = std::sqrt(1.0 - s * g / (1.0 + s));
        const double b = std::sqrt(g / (1.0 + s));
        e.u1 = s / (1.0 + s) * (a - b) * (a - b);
        e.u2 = s / (1.0 + s) * (a + b) * (a + b);
    } else {
        e.u1 = std::numeric_limits<double>::quiet_NaN();
        e.u2 = std::numeric_limits<double>::quiet_NaN();
    }
    return e;
}

double nu_tilde_density(double x, const LimitRegime& regime) {
    const double g = regime.gamma();
    const double s = regime.sigma();
    switch (regime.kind()) {
        case RegimeCase::Interior: {
            const SupportEdges e = support_edges(regime);
            const double t = s / (1.0 + s) * (1.0 + std::sqrt(g) * x);
            return s * std::sqrt(g) / (1.0 + s) * wachter_density(t, g, s, e.u1, e.u2);
        }
        case RegimeCase::SigmaZero:
            return std::sqrt(g) * marchenko_pastur_density(1.0 + std::sqrt(g) * x, g);
        case RegimeCase::GammaZero:
            return std::sqrt(1.0 + s) * semicircle_density(std::sqrt(1.0 + s) * x, 2.0);
    }
    return 0.0;
}

double phi(double x, const LimitRegime& regime) {
    if (!(x > regime.domain_lower() && x < regime.domain_upper())) {
        std::ostringstream msg;
        msg << "phi: x = " << x << " outside the natural domain (" << regime.domain_lower() << ", "
            << regime.domain_upper() << ")";
        throw DomainError(msg.str());
    }
    const double g = regime.gamma();
    const double s = regime.sigma();
    const double sg = std::sqrt(g);
    switch (regime.kind()) {
        case RegimeCase::Interior:
            return (1.0 - g) / (2.0 * g) * std::log1p(sg * x) + (1.0 - g * s) / (2.0 * g * s) * std::log1p(-sg * s * x);
        case RegimeCase::SigmaZero:
            return (1.0 - g) / (2.0 * g) * std::log1p(sg * x) - x / (2.0 * sg);
        case RegimeCase::GammaZero:
            return -(1.0 + s) / 4.0 * x * x;
    }
    return 0.0;
}

double phi_finite_n(double x, const EnsembleParams& params, double a) {
    const double nd = static_cast<double>(params.n());
    if (a == nd) {
        throw ParameterError("phi_finite_n: a must differ from n");
    }
    const double lower_arg = 1.0 + params.s1() * x;
    const double upper_arg = 1.0 - params.s2() * x;
    if (!(lower_arg > 0.0) || !(upper_arg > 0.0)) {
        std::ostringstream msg;
        msg << "phi_finite_n: x = " << x << " outside (" << params.x_lower() << ", " << params.x_upper() << ")";
        throw DomainError(msg.str());
    }
    const double scale = params.beta() * (nd - a);
    return (params.r1() - a) / scale * std::log1p(params.s1() * x) +
           (params.r2() - a) / scale * std::log1p(-params.s2() * x);
}

double z_const(const LimitRegime& regime) {
    const double g = regime.gamma();
    const double s = regime.sigma();
    switch (regime.kind()) {
        case RegimeCase::Interior: {
            const double rest = 1.0 + s - g * s;
            return 0.5 * std::log1p(s) + rest / (2.0 * g * s) * std::log1p(g * s / rest);
        }
        case RegimeCase::SigmaZero:
            return 0.5;
        case RegimeCase::GammaZero:
            return 0.5 * std::log1p(s) + 0.5;
    }
    return 0.0;
}

int support_indicator(std::complex<double> z, const SupportEdges& edges) {
    if (z.imag() > 0.0) return 1;
    if (z.imag() < 0.0) return -1;
    if (z.real() > edges.u_tilde_2) return 1;
    if (z.real() < edges.u_tilde_1) return -1;
    return 0;
}

std::complex<double> stieltjes(std::complex<double> z, const LimitRegime& regime) {
    const SupportEdges e = support_edges(regime);
    if (support_indicator(z, e) == 0) {
        std::ostringstream msg;
        msg << "stieltjes: z = " << z.real() << " lies on the support [" << e.u_tilde_1 << ", " << e.u_tilde_2 << "]";
        throw DomainError(msg.str());
    }
    const double g = regime.gamma();
    const double s = regime.sigma();
    // S̃(z) = [−√γ(1−σ) − a z + b R(z)] / (2 D(z)), a = 1+σ−2γσ, b = 1+σ,
    // R(z) = √(z−ũ2)·√(z−ũ1) ~ z at infinity. b R − a z is rationalized so the
    // semicircle case keeps its accuracy far from the support.
    const double a = 1.0 + s - 2.0 * g * s;
    const double b = 1.0 + s;
    const std::complex<double> root = std::sqrt(z - e.u_tilde_2) * std::sqrt(z - e.u_tilde_1);
    const std::complex<double> r_squared = (z - e.u_tilde_2) * (z - e.u_tilde_1);
    const std::complex<double> tail = (b * b * r_squared - a * a * z * z) / (b * root + a * z);
    const std::complex<double> numer = -std::sqrt(g) * (1.0 - s) + tail;
    return numer / (2.0 * edge_denominator(z, regime));
}

RateFunctions::RateFunctions(const LimitRegime& regime, QuadratureConfig quad)
    : regime_(regime), edges_(support_edges(regime)), z_(z_const(regime)), quad_(quad) {}

double RateFunctions::edge_factor(double x) const {
    return (1.0 + regime_.sigma()) / 2.0 / edge_denominator(x, regime_);
}

double RateFunctions::derivative_max(double x) const {
    if (x == edges_.u_tilde_2) return 0.0;
    if (!(x >= edges_.u_tilde_2 && x < regime_.domain_upper())) {
        std::ostringstream msg;
        msg << "rate_derivative_max: x = " << x << " outside [" << edges_.u_tilde_2 << ", " << regime_.domain_upper()
            << ")";
        throw DomainError(msg.str());
    }
    return edge_factor(x) * std::sqrt((x - edges_.u_tilde_2) * (x - edges_.u_tilde_1));
}

double RateFunctions::derivative_min(double x) const {
    if (x == edges_.u_tilde_1) return 0.0;
    if (!(x <= edges_.u_tilde_1 && x > regime_.domain_lower())) {
        std::ostringstream msg;
        msg << "rate_derivative_min: x = " << x << " outside (" << regime_.domain_lower() << ", " << edges_.u_tilde_1
            << "]";
        throw DomainError(msg.str());
    }
    return edge_factor(x) * std::sqrt((edges_.u_tilde_2 - x) * (edges_.u_tilde_1 - x));
}

double RateFunctions::rate_max(double x) const {
    if (x == edges_.u_tilde_2) return 0.0;
    if (!(x >= edges_.u_tilde_2 && x < regime_.domain_upper())) return kInfiniteRate;
    // t = ũ2 + s² absorbs the square-root zero of J′ at the edge.
    const double width = edges_.u_tilde_2 - edges_.u_tilde_1;
    const auto integrand = [&](double s) {
        const double t = edges_.u_tilde_2 + s * s;
        return 2.0 * s * s * std::sqrt(s * s + width) * edge_factor(t);
    };
    return integrate_gk15(integrand, 0.0, std::sqrt(x - edges_.u_tilde_2), quad_).value;
}

double RateFunctions::rate_min(double x) const {
    if (x == edges_.u_tilde_1) return 0.0;
    if (!(x <= edges_.u_tilde_1 && x > regime_.domain_lower())) return kInfiniteRate;
    const double width = edges_.u_tilde_2 - edges_.u_tilde_1;
    const auto integrand = [&](double s) {
        const double t = edges_.u_tilde_1 - s * s;
        return 2.0 * s * s * std::sqrt(s * s + width) * edge_factor(t);
    };
    return integrate_gk15(integrand, 0.0, std::sqrt(edges_.u_tilde_1 - x), quad_).value;
}

double RateFunctions::log_potential(double x) const {
    // y = m − h cos θ maps [0, π] onto the support; the density's square-root
    // edges become smooth sin θ factors.
    const double m = 0.5 * (edges_.u_tilde_1 + edges_.u_tilde_2);
    const double h = 0.5 * (edges_.u_tilde_2 - edges_.u_tilde_1);
    const auto integrand = [&](double theta) {
        const double y = m - h * std::cos(theta);
        const double gap = std::abs(x - y);
        if (gap == 0.0) return 0.0;
        return std::log(gap) * nu_tilde_density(y, regime_) * h * std::sin(theta);
    };
    QuadratureConfig cfg = quad_;
    cfg.abs_tol = std::max(cfg.abs_tol, 1e-12);
    if (x > edges_.u_tilde_1 && x < edges_.u_tilde_2) {
        const double split = std::acos(std::clamp((m - x) / h, -1.0, 1.0));
        return integrate_gk15(integrand, 0.0, split, cfg).value + integrate_gk15(integrand, split, kPi, cfg).value;
    }
    return integrate_gk15(integrand, 0.0, kPi, cfg).value;
}

double RateFunctions::direct_rate(double x) const {
    return -z_ - log_potential(x) - phi(x, regime_);
}

double rate_derivative_max(double x, const LimitRegime& regime) { return RateFunctions(regime).derivative_max(x); }
double rate_derivative_min(double x, const LimitRegime& regime) { return RateFunctions(regime).derivative_min(x); }
double rate_max(double x, const LimitRegime& regime) { return RateFunctions(regime).rate_max(x); }
double rate_min(double x, const LimitRegime& regime) { return RateFunctions(regime).rate_min(x); }
double log_potential(double x, const LimitRegime& regime) { return RateFunctions(regime).log_potential(x); }

}  // namespace jrare
