#pragma once

#include <span>
#include <string_view>

#include "jacobi_rare/ensemble.hpp"
#include "jacobi_rare/random.hpp"
#include "jacobi_rare/spectral.hpp"

namespace jrare {

enum class TiltTarget {
    MaxAbove,  ///< P(X_(n) > x)
    MinBelow,  ///< P(X_(1) < x)
};

std::string_view to_string(TiltTarget t);
/// Parses "max-above" or "min-below". Throws ParameterError.
TiltTarget parse_target(std::string_view text);

struct TiltConfig {
    TiltTarget target = TiltTarget::MaxAbove;
    double threshold_x = 0.0;
    /// r = rate_multiplier · β(n−1) · |rate derivative at threshold|, in (0, 2).
    double rate_multiplier = 1.0;
    LimitRegime regime = LimitRegime::make(0.0, 0.0);
};

/// One replication under the tilted measure R (max) or T (min).
struct ISDraw {
    OrderedSpectrum base;        ///< X-scaled draw of J_{n−1}(p1−1, p2−1), size n−1
    double tilted_value = 0.0;   ///< X̃_n (max) or X̂_1 (min)
    double log_weight = -kInfiniteRate;
    bool indicator = false;
};

/// Per-run constants of the likelihood ratio.
struct WeightConstants {
    double log_bn = 0.0;
    double tilt_rate = 0.0;
    /// Fixed end of the truncation interval: p2/√(n p1) for the maximum,
    /// −√(p1/n) for the minimum.
    double outer_bound = 0.0;
};

/// log u_n(x) = (r1−1) log(1+s1 x) + (r2−1) log(1−s2 x).
/// Throws DomainError unless −1/s1 < x < 1/s2.
double log_u_n(double x, const EnsembleParams& params);

/// log B_n, the factor linking dQ_n to dx_n dQ_{n−1}^{p1−1,p2−1} in X
/// coordinates:
///   B_n = n · C_n/C_{n−1} · (√(n p1)/p)^{β(n−1)+1} · (p1/p)^{r1−1} · (p2/p)^{r2−1},
///   C_n/C_{n−1} = Γ(1+β/2)Γ(βp/2)Γ(β(p−1)/2) / (Γ(1+βn/2)Γ(βp1/2)Γ(βp2/2)Γ(β(p−n)/2)).
/// Throws ParameterError if a Gamma argument is not positive.
double log_Bn(const EnsembleParams& params);

enum class TailDirection {
    Rightward,  ///< density ∝ e^{−r(y − lower)}, mass piles up at `lower`
    Leftward,   ///< density ∝ e^{r(y − upper)}, mass piles up at `upper`
};

/// Exact inverse-CDF draw from the exponential truncated to (lower, upper).
/// The result is strictly inside the interval. Throws ParameterError when
/// rate <= 0 or lower >= upper.
double sample_truncated_exp(double rate, double lower, double upper, TailDirection direction, RandomStream& rng);

/// Log density of the truncated exponential at y (including its normalizer).
double log_truncated_exp_density(double y, double rate, double lower, double upper, TailDirection direction);

/// Tilted sampler for one (params, threshold) pair. Validates the threshold
/// against the admissible interval and caches B_n and the tilt rate.
class TiltedSampler {
public:
    TiltedSampler(const EnsembleParams& params, const TiltConfig& cfg);

    const EnsembleParams& params() const noexcept { return params_; }
    const TiltConfig& config() const noexcept { return cfg_; }
    const WeightConstants& constants() const noexcept { return constants_; }

    /// Open interval of admissible X-thresholds for this target.
    double admissible_lower() const noexcept { return admissible_lower_; }
    double admissible_upper() const noexcept { return admissible_upper_; }

    ISDraw draw(RandomStream& rng) const;

    /// Log likelihood ratio of a (base, tilted value) pair; −∞ when the
    /// tilted value misses the threshold event. Throws InvariantViolation
    /// when the tilted value is not beyond the base extremum.
    double log_weight(std::span<const double> base_x, double tilted_value) const;

private:
    double inner_bound(std::span<const double> base_x) const;

    EnsembleParams params_;
    TiltConfig cfg_;
    WeightConstants constants_;
    double admissible_lower_ = 0.0;
    double admissible_upper_ = 0.0;
};

/// Draw under R (maximum above cfg.threshold_x).
ISDraw draw_R(const EnsembleParams& params, const TiltConfig& cfg, RandomStream& rng);
/// Draw under T (minimum below cfg.threshold_x).
ISDraw draw_T(const EnsembleParams& params, const TiltConfig& cfg, RandomStream& rng);

/// log F_n for a base sample and tilted maximum.
double log_F(std::span<const double> base_x, double tilted_value, const TiltedSampler& sampler);
/// log G_n for a base sample and tilted minimum.
double log_G(std::span<const double> base_x, double tilted_value, const TiltedSampler& sampler);

}  // namespace jrare
