#include "jacobi_rare/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "jacobi_rare/error.hpp"

namespace jrare {

namespace {

constexpr double kZ95 = 1.959963984540054;
constexpr std::size_t kChunk = 256;

}  // namespace

std::string_view to_string(Method m) {
    return m == Method::IS ? "IS" : "NaiveMC";
}

void MomentAccumulator::Neumaier::add(double v) noexcept {
    const double t = s + v;
    if (std::abs(s) >= std::abs(v)) {
        c += (s - t) + v;
    } else {
        c += (v - t) + s;
    }
    s = t;
}

void MomentAccumulator::rescale_to(int new_shift) {
    const int delta = shift_ - new_shift;
    sum_.scale(std::ldexp(1.0, delta));
    sum_sq_.scale(std::ldexp(1.0, 2 * delta));
    shift_ = new_shift;
}

void MomentAccumulator::add_scaled(double mantissa, int exponent) {
    if (hits_ == 0) {
        shift_ = exponent;
    } else if (exponent > shift_) {
        rescale_to(exponent);
    }
    const double v = std::ldexp(mantissa, exponent - shift_);
    sum_.add(v);
    sum_sq_.add(v * v);
    ++hits_;
}

void MomentAccumulator::add(double w) {
    if (!(w >= 0.0) || std::isinf(w)) {
        throw InvariantViolation("weights must be finite and nonnegative");
    }
    ++count_;
    if (w == 0.0) return;
    int e = 0;
    const double m = std::frexp(w, &e);
    add_scaled(m, e);
}

void MomentAccumulator::add_log(double log_w) {
    if (std::isnan(log_w) || log_w == std::numeric_limits<double>::infinity()) {
        throw InvariantViolation("log-weight must be finite or -inf");
    }
    ++count_;
    if (log_w == -std::numeric_limits<double>::infinity()) return;
    const double e = std::floor(log_w / std::numbers::ln2);
    const double m = std::exp(log_w - e * std::numbers::ln2);
    add_scaled(m, static_cast<int>(e));
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    if (other.hits_ > 0) {
        if (hits_ == 0) {
            shift_ = other.shift_;
        } else if (other.shift_ > shift_) {
            rescale_to(other.shift_);
        }
        const int delta = other.shift_ - shift_;
        const double f1 = std::ldexp(1.0, delta);
        const double f2 = std::ldexp(1.0, 2 * delta);
        sum_.add(other.sum_.s * f1);
        sum_.add(other.sum_.c * f1);
        sum_sq_.add(other.sum_sq_.s * f2);
        sum_sq_.add(other.sum_sq_.c * f2);
    }
    count_ += other.count_;
    hits_ += other.hits_;
}

double MomentAccumulator::sum() const noexcept {
    return std::ldexp(sum_.value(), shift_);
}

EstimateReport finalize(const MomentAccumulator& acc, Method method, VarianceForm form) {
    EstimateReport r;
    r.method = method;
    r.variance_form = form;
    r.n_reps = acc.count();
    r.hits = acc.hits();
    r.zero_hits = acc.hits() == 0;
    const double inf = std::numeric_limits<double>::infinity();
    if (acc.count() == 0 || r.zero_hits) {
        r.cov_sample = inf;
        r.cov_mean = inf;
        if (method == Method::NaiveMC && acc.count() > 0) {
            const double n = static_cast<double>(acc.count());
            r.ci_high = kZ95 * kZ95 / (n + kZ95 * kZ95);
        }
        return r;
    }

    const double n = static_cast<double>(acc.count());
    const double mean_s = acc.scaled_sum() / n;
    const double second_s = acc.scaled_sum_sq() / n;
    double var_s = std::max(second_s - mean_s * mean_s, 0.0);
    if (form == VarianceForm::Sample) {
        var_s = acc.count() > 1 ? var_s * n / (n - 1.0) : 0.0;
    }
    const double std_s = std::sqrt(var_s);

    r.estimate = std::ldexp(mean_s, acc.shift());
    r.std_dev = std::ldexp(std_s, acc.shift());
    r.cov_sample = std_s / mean_s;
    r.cov_mean = r.cov_sample / std::sqrt(n);

    if (method == Method::NaiveMC) {
        const double p = r.estimate;
        const double z2 = kZ95 * kZ95;
        const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
        const double half = kZ95 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
        r.ci_low = std::clamp(centre - half, 0.0, p);
        r.ci_high = std::clamp(centre + half, p, 1.0);
    } else {
        const double half = kZ95 * r.std_dev / std::sqrt(n);
        r.ci_low = std::max(r.estimate - half, 0.0);
        r.ci_high = r.estimate + half;
    }
    return r;
}

std::vector<double> parallel_map(std::size_t count, std::size_t workers, const std::function<double(std::size_t)>& fn) {
    std::vector<double> out(count, 0.0);
    workers = std::max<std::size_t>(1, std::min(workers, (count + kChunk - 1) / kChunk));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::size_t> error_index(workers, count);

    auto work = [&](std::size_t w) {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t begin = next.fetch_add(kChunk);
            if (begin >= count) return;
            const std::size_t end = std::min(begin + kChunk, count);
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                    error_index[w] = i;
                    failed.store(true);
                    return;
                }
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();

    std::size_t first = workers;
    for (std::size_t w = 0; w < workers; ++w) {
        if (errors[w] && (first == workers || error_index[w] < error_index[first])) first = w;
    }
    if (first != workers) std::rethrow_exception(errors[first]);
    return out;
}

std::vector<double> is_log_weights(const TiltedSampler& sampler, std::size_t n_reps, const RunOptions& opts) {
    return parallel_map(n_reps, opts.workers, [&](std::size_t i) {
        RandomStream rng = RandomStream::for_replication(opts.seed, i);
        return sampler.draw(rng).log_weight;
    });
}

std::vector<double> naive_indicators(const EnsembleParams& params, const Threshold& threshold, TiltTarget target,
                                     std::size_t n_reps, const RunOptions& opts) {
    const double x_lambda = convert(threshold.value, threshold.coordinate, Coordinate::Lambda, params);
    return parallel_map(n_reps, opts.workers, [&](std::size_t i) {
        RandomStream rng = RandomStream::for_replication(opts.seed, i);
        const OrderedSpectrum s = sample_jacobi(params, rng);
        const bool hit = target == TiltTarget::MaxAbove ? s.max() > x_lambda : s.min() < x_lambda;
        return hit ? 1.0 : 0.0;
    });
}

MomentAccumulator accumulate_log(const std::vector<double>& log_weights, std::size_t count) {
    MomentAccumulator acc;
    count = std::min(count, log_weights.size());
    for (std::size_t i = 0; i < count; ++i) acc.add_log(log_weights[i]);
    return acc;
}

MomentAccumulator accumulate(const std::vector<double>& weights, std::size_t count) {
    MomentAccumulator acc;
    count = std::min(count, weights.size());
    for (std::size_t i = 0; i < count; ++i) acc.add(weights[i]);
    return acc;
}

EstimateReport estimate_is(const EnsembleParams& params, const TiltConfig& cfg, std::size_t n_reps,
                           const RunOptions& opts) {
    if (n_reps == 0) throw ParameterError("number of replications must be positive");
    const TiltedSampler sampler(params, cfg);
    const auto lw = is_log_weights(sampler, n_reps, opts);
    return finalize(accumulate_log(lw, lw.size()), Method::IS, opts.variance_form);
}

EstimateReport naive_mc(const EnsembleParams& params, const Threshold& threshold, TiltTarget target,
                        std::size_t n_reps, const RunOptions& opts) {
    if (n_reps == 0) throw ParameterError("number of replications must be positive");
    const auto w = naive_indicators(params, threshold, target, n_reps, opts);
    return finalize(accumulate(w, w.size()), Method::NaiveMC, opts.variance_form);
}

Comparison compare(const EstimateReport& a, const EstimateReport& b) {
    Comparison c;
    if (a.zero_hits || b.zero_hits) {
        c.inconclusive = true;
        c.z_score = std::numeric_limits<double>::quiet_NaN();
        return c;
    }
    const double se_a = a.std_dev / std::sqrt(static_cast<double>(a.n_reps));
    const double se_b = b.std_dev / std::sqrt(static_cast<double>(b.n_reps));
    const double se = std::hypot(se_a, se_b);
    if (!(se > 0.0)) {
        c.inconclusive = true;
        c.z_score = std::numeric_limits<double>::quiet_NaN();
        return c;
    }
    c.z_score = (a.estimate - b.estimate) / se;
    return c;
}

std::vector<CovPoint> cov_curve(const std::vector<double>& log_weights, const std::vector<std::size_t>& checkpoints,
                                VarianceForm form) {
    std::vector<CovPoint> out;
    out.reserve(checkpoints.size());
    MomentAccumulator acc;
    std::size_t done = 0;
    for (std::size_t cp : checkpoints) {
        if (cp < done || cp > log_weights.size()) {
            throw ParameterError("checkpoints must be nondecreasing and within the number of replications");
        }
        for (; done < cp; ++done) acc.add_log(log_weights[done]);
        out.push_back({cp, finalize(acc, Method::IS, form).cov_sample});
    }
    return out;
}

std::vector<std::size_t> log_spaced_checkpoints(std::size_t first, std::size_t last, std::size_t count) {
    if (first == 0 || first > last) throw ParameterError("checkpoint range must satisfy 1 <= first <= last");
    std::vector<std::size_t> out;
    if (count < 2 || first == last) {
        out.push_back(last);
        return out;
    }
    const double lf = std::log(static_cast<double>(first));
    const double ll = std::log(static_cast<double>(last));
    for (std::size_t k = 0; k < count; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(count - 1);
        auto v = static_cast<std::size_t>(std::llround(std::exp(lf + t * (ll - lf))));
        v = std::clamp(v, first, last);
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    if (out.back() != last) out.push_back(last);
    return out;
}

}  // namespace jrare
