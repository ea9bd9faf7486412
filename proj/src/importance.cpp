#include "jacobi_rare/importance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "jacobi_rare/error.hpp"
#include "jacobi_rare/scaling.hpp"
#include "jacobi_rare/special.hpp"

namespace jrare {

std::string_view to_string(TiltTarget t) {
    return t == TiltTarget::MaxAbove ? "max-above" : "min-below";
}

TiltTarget parse_target(std::string_view text) {
    if (text == "max-above") return TiltTarget::MaxAbove;
    if (text == "min-below") return TiltTarget::MinBelow;
    throw ParameterError("unknown target '" + std::string(text) + "' (expected max-above or min-below)");
}

double log_u_n(double x, const EnsembleParams& params) {
    const double lower_arg = 1.0 + params.s1() * x;
    const double upper_arg = 1.0 - params.s2() * x;
    if (!(lower_arg > 0.0) || !(upper_arg > 0.0)) {
        std::ostringstream msg;
        msg << "log_u_n: x = " << x << " outside (" << params.x_lower() << ", " << params.x_upper() << ")";
        throw DomainError(msg.str());
    }
    return (params.r1() - 1.0) * std::log1p(params.s1() * x) + (params.r2() - 1.0) * std::log1p(-params.s2() * x);
}

double log_Bn(const EnsembleParams& params) {
    const double beta = params.beta();
    const double n = static_cast<double>(params.n());
    const double p = params.p();
    const double p1 = params.p1();
    const double p2 = params.p2();

    const double gamma_ratio = log_gamma(1.0 + beta / 2.0) + log_gamma(beta * p / 2.0) +
                               log_gamma(beta * (p - 1.0) / 2.0) - log_gamma(1.0 + beta * n / 2.0) -
                               log_gamma(beta * p1 / 2.0) - log_gamma(beta * p2 / 2.0) -
                               log_gamma(beta * (p - n) / 2.0);

    // Jacobian of λ = (p1 + √(n p1) X)/p on the new coordinate and its n−1 gaps,
    // plus the constants pulled out of λ^{r1−1}(1−λ)^{r2−1}.
    const double jacobian = (beta * (n - 1.0) + 1.0) * std::log(std::sqrt(n * p1) / p) +
                            (params.r1() - 1.0) * std::log(p1 / p) + (params.r2() - 1.0) * std::log(p2 / p);
    return std::log(n) + gamma_ratio + jacobian;
}

double sample_truncated_exp(double rate, double lower, double upper, TailDirection direction, RandomStream& rng) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw ParameterError("sample_truncated_exp: rate must be positive and finite, got " + std::to_string(rate));
    }
    if (!(lower < upper)) {
        std::ostringstream msg;
        msg << "sample_truncated_exp: empty interval (" << lower << ", " << upper << ")";
        throw ParameterError(msg.str());
    }
    const double length = upper - lower;
    // Offset from the attracting endpoint: −log(1 − U(1 − e^{−r L}))/r ∈ (0, L).
    const double u = rng.uniform_open();
    const double offset = -std::log1p(u * std::expm1(-rate * length)) / rate;
    const double inside_lo = std::nextafter(lower, upper);
    const double inside_hi = std::nextafter(upper, lower);
    const double y = direction == TailDirection::Rightward ? lower + offset : upper - offset;
    return std::clamp(y, inside_lo, inside_hi);
}

double log_truncated_exp_density(double y, double rate, double lower, double upper, TailDirection direction) {
    if (!(y > lower && y < upper)) return -kInfiniteRate;
    const double log_norm = std::log(rate) - std::log(-std::expm1(-rate * (upper - lower)));
    const double distance = direction == TailDirection::Rightward ? y - lower : upper - y;
    return log_norm - rate * distance;
}

TiltedSampler::TiltedSampler(const EnsembleParams& params, const TiltConfig& cfg) : params_(params), cfg_(cfg) {
    if (!(cfg.rate_multiplier > 0.0 && cfg.rate_multiplier < 2.0)) {
        throw ParameterError("rate multiplier must lie in (0, 2), got " + std::to_string(cfg.rate_multiplier));
    }
    const RateFunctions rates(cfg.regime);
    const SupportEdges& edges = rates.edges();
    const double x = cfg.threshold_x;

    std::ostringstream msg;
    if (cfg.target == TiltTarget::MaxAbove) {
        admissible_lower_ = edges.u_tilde_2;
        admissible_upper_ = std::min(cfg.regime.domain_upper(), params.x_upper());
        constants_.outer_bound = params.x_upper();
    } else {
        admissible_lower_ = std::max(cfg.regime.domain_lower(), params.x_lower());
        admissible_upper_ = edges.u_tilde_1;
        constants_.outer_bound = params.x_lower();
    }
    if (!(x > admissible_lower_ && x < admissible_upper_)) {
        msg << "threshold x = " << x << " (X coordinates) outside the admissible interval (" << admissible_lower_
            << ", " << admissible_upper_ << ") for target " << to_string(cfg.target) << " in the "
            << to_string(cfg.regime.kind()) << " regime (gamma = " << cfg.regime.gamma()
            << ", sigma = " << cfg.regime.sigma() << ")";
        throw DomainError(msg.str());
    }

    const double slope = cfg.target == TiltTarget::MaxAbove ? rates.derivative_max(x) : rates.derivative_min(x);
    constants_.tilt_rate = cfg.rate_multiplier * params.beta() * static_cast<double>(params.n() - 1) * slope;
    constants_.log_bn = log_Bn(params);
}

double TiltedSampler::inner_bound(std::span<const double> base_x) const {
    if (cfg_.target == TiltTarget::MaxAbove) {
        return base_x.empty() ? cfg_.threshold_x : std::max(cfg_.threshold_x, base_x.back());
    }
    return base_x.empty() ? cfg_.threshold_x : std::min(cfg_.threshold_x, base_x.front());
}

double TiltedSampler::log_weight(std::span<const double> base_x, double tilted_value) const {
    const bool max_side = cfg_.target == TiltTarget::MaxAbove;
    if (!base_x.empty()) {
        const bool beyond = max_side ? tilted_value > base_x.back() : tilted_value < base_x.front();
        if (!beyond) {
            std::ostringstream msg;
            msg << "tilted value " << tilted_value << " is not beyond the base "
                << (max_side ? "maximum " : "minimum ") << (max_side ? base_x.back() : base_x.front());
            throw InvariantViolation(msg.str());
        }
    }
    const bool hit = max_side ? tilted_value > cfg_.threshold_x : tilted_value < cfg_.threshold_x;
    if (!hit) return -kInfiniteRate;

    const double inner = inner_bound(base_x);
    const double lower = max_side ? inner : constants_.outer_bound;
    const double upper = max_side ? constants_.outer_bound : inner;
    const TailDirection dir = max_side ? TailDirection::Rightward : TailDirection::Leftward;

    double log_proposal = 0.0;
    if (constants_.tilt_rate > 0.0) {
        log_proposal = log_truncated_exp_density(tilted_value, constants_.tilt_rate, lower, upper, dir);
    } else {
        log_proposal = -std::log(upper - lower);  // n = 1: uniform proposal
    }

    double log_vandermonde = 0.0;
    for (double xi : base_x) {
        log_vandermonde += std::log(std::abs(tilted_value - xi));
    }
    return constants_.log_bn - log_proposal + params_.beta() * log_vandermonde + log_u_n(tilted_value, params_);
}

ISDraw TiltedSampler::draw(RandomStream& rng) const {
    ISDraw out;
    out.base.coordinate = Coordinate::X;
    if (params_.n() >= 2) {
        // Reduced ensemble, scaled with the original (n, p1, p).
        const OrderedSpectrum lambdas = sample_jacobi(params_.reduced(), rng);
        out.base.values.reserve(lambdas.values.size());
        for (double v : lambdas.values) {
            out.base.values.push_back(lambda_to_x(v, params_));
        }
    }

    const bool max_side = cfg_.target == TiltTarget::MaxAbove;
    const double inner = inner_bound(out.base.values);
    const double lower = max_side ? inner : constants_.outer_bound;
    const double upper = max_side ? constants_.outer_bound : inner;
    if (!(lower < upper)) {
        // Empty truncation interval: reachable only through rounding.
        out.tilted_value = inner;
        return out;
    }

    if (constants_.tilt_rate > 0.0) {
        out.tilted_value = sample_truncated_exp(constants_.tilt_rate, lower, upper,
                                                max_side ? TailDirection::Rightward : TailDirection::Leftward, rng);
    } else {
        out.tilted_value = std::clamp(lower + (upper - lower) * rng.uniform_open(), std::nextafter(lower, upper),
                                      std::nextafter(upper, lower));
    }
    out.log_weight = log_weight(out.base.values, out.tilted_value);
    out.indicator = std::isfinite(out.log_weight);
    return out;
}

ISDraw draw_R(const EnsembleParams& params, const TiltConfig& cfg, RandomStream& rng) {
    if (cfg.target != TiltTarget::MaxAbove) {
        throw ParameterError("draw_R needs target max-above");
    }
    return TiltedSampler(params, cfg).draw(rng);
}

ISDraw draw_T(const EnsembleParams& params, const TiltConfig& cfg, RandomStream& rng) {
    if (cfg.target != TiltTarget::MinBelow) {
        throw ParameterError("draw_T needs target min-below");
    }
    return TiltedSampler(params, cfg).draw(rng);
}

double log_F(std::span<const double> base_x, double tilted_value, const TiltedSampler& sampler) {
    if (sampler.config().target != TiltTarget::MaxAbove) {
        throw ParameterError("log_F needs a max-above sampler");
    }
    return sampler.log_weight(base_x, tilted_value);
}

double log_G(std::span<const double> base_x, double tilted_value, const TiltedSampler& sampler) {
    if (sampler.config().target != TiltTarget::MinBelow) {
        throw ParameterError("log_G needs a min-below sampler");
    }
    return sampler.log_weight(base_x, tilted_value);
}

}  // namespace jrare
