#pragma once

#include <complex>
#include <limits>
#include <string_view>

#include "jacobi_rare/ensemble.hpp"
#include "jacobi_rare/quadrature.hpp"

namespace jrare {

enum class RegimeCase {
    Interior,   ///< 0 < γσ < 1, γ > 0: scaled Wachter law
    SigmaZero,  ///< σ = 0, 0 < γ <= 1: scaled Marchenko-Pastur law
    GammaZero,  ///< γ = 0, σ >= 0: scaled semicircle law
};

std::string_view to_string(RegimeCase c);

/// Limiting parameters γ = lim n/p1 and σ = lim p1/p2.
class LimitRegime {
public:
    /// Validates assumption A: γ ∈ [0, 1], σ >= 0, and when σ > 0 also
    /// γ < 1 and γσ < 1. Throws RegimeError otherwise.
    static LimitRegime make(double gamma, double sigma);

    double gamma() const noexcept { return gamma_; }
    double sigma() const noexcept { return sigma_; }
    RegimeCase kind() const noexcept { return kind_; }

    /// Lower end of the natural X-domain, −1/√γ (−∞ when γ = 0).
    double domain_lower() const noexcept;
    /// Upper end of the natural X-domain, 1/(√γ σ) (+∞ when γσ = 0).
    double domain_upper() const noexcept;

private:
    LimitRegime(double gamma, double sigma, RegimeCase kind) : gamma_(gamma), sigma_(sigma), kind_(kind) {}

    double gamma_;
    double sigma_;
    RegimeCase kind_;
};

/// γ = n/p1 and σ = p1/p2, each zeroed when it does not exceed `threshold`.
LimitRegime limit_regime(const EnsembleParams& params, double threshold = 0.01);

struct SupportEdges {
    double u_tilde_1;  ///< a.s. limit of X_(1)
    double u_tilde_2;  ///< a.s. limit of X_(n)
    double u1;         ///< lower Wachter edge in λ-scale (NaN unless γσ > 0)
    double u2;         ///< upper Wachter edge in λ-scale (NaN unless γσ > 0)
};

SupportEdges support_edges(const LimitRegime& regime);

/// Density of the limit law ν̃_{γ,σ} of the X-scaled empirical measure.
double nu_tilde_density(double x, const LimitRegime& regime);

/// φ_{γ,σ}(x). Throws DomainError outside (−1/√γ, 1/(√γσ)).
double phi(double x, const LimitRegime& regime);

/// Finite-n counterpart
///   φ_{n−a}(x) = (r1−a)/(β(n−a)) log(1+s1 x) + (r2−a)/(β(n−a)) log(1−s2 x).
/// Throws ParameterError when a = n and DomainError when a log argument is <= 0.
double phi_finite_n(double x, const EnsembleParams& params, double a);

/// z_{γ,σ} = lim log B_n / (βn).
double z_const(const LimitRegime& regime);

/// Sign of the analytic branch: +1 on {Im z > 0} ∪ (ũ2, ∞), −1 on
/// {Im z < 0} ∪ (−∞, ũ1), 0 on the support [ũ1, ũ2].
int support_indicator(std::complex<double> z, const SupportEdges& edges);

/// Stieltjes transform S̃(z) = ∫ ν̃(dy)/(y − z). Throws DomainError on the support.
std::complex<double> stieltjes(std::complex<double> z, const LimitRegime& regime);

inline constexpr double kInfiniteRate = std::numeric_limits<double>::infinity();

/// Rate functions J (maximum) and I (minimum) with their derivatives, plus the
/// log-potential used to cross-check them. Caches edges and z_{γ,σ}.
class RateFunctions {
public:
    explicit RateFunctions(const LimitRegime& regime, QuadratureConfig quad = {});

    const LimitRegime& regime() const noexcept { return regime_; }
    const SupportEdges& edges() const noexcept { return edges_; }
    double z() const noexcept { return z_; }

    /// J′(x) for ũ2 < x < 1/(√γσ); DomainError otherwise (0 at x = ũ2).
    double derivative_max(double x) const;
    /// |I′(x)| for −1/√γ < x < ũ1; DomainError otherwise (0 at x = ũ1).
    double derivative_min(double x) const;

    /// J(x) = ∫_{ũ2}^{x} J′; kInfiniteRate off [ũ2, 1/(√γσ)).
    double rate_max(double x) const;
    /// I(x) = ∫_{x}^{ũ1} |I′|; kInfiniteRate off (−1/√γ, ũ1].
    double rate_min(double x) const;

    /// ∫ log|x − y| ν̃(dy).
    double log_potential(double x) const;

    /// −z − ∫ log|x − y| ν̃(dy) − φ(x), the direct form of J and I.
    double direct_rate(double x) const;

private:
    double edge_factor(double x) const;

    LimitRegime regime_;
    SupportEdges edges_;
    double z_;
    QuadratureConfig quad_;
};

double rate_derivative_max(double x, const LimitRegime& regime);
double rate_derivative_min(double x, const LimitRegime& regime);
double rate_max(double x, const LimitRegime& regime);
double rate_min(double x, const LimitRegime& regime);
double log_potential(double x, const LimitRegime& regime);

}  // namespace jrare
