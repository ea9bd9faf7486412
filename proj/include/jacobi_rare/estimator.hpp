#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "jacobi_rare/ensemble.hpp"
#include "jacobi_rare/importance.hpp"
#include "jacobi_rare/scaling.hpp"

namespace jrare {

enum class Method { IS, NaiveMC };
std::string_view to_string(Method m);

enum class VarianceForm {
    Population,  ///< divide by N
    Sample,      ///< divide by N − 1
};

/// Running Σw, Σw², count and hit count of nonnegative weights.
///
/// Weights are held as w·2^{−shift} where 2^shift tracks the largest weight
/// seen, so log-domain weights far below the double range still accumulate.
/// Both sums use Neumaier compensation.
class MomentAccumulator {
public:
    void add(double w);
    void add_log(double log_w);
    void merge(const MomentAccumulator& other);

    std::size_t count() const noexcept { return count_; }
    std::size_t hits() const noexcept { return hits_; }
    int shift() const noexcept { return shift_; }
    /// Σw · 2^{−shift} and Σw² · 2^{−2 shift}.
    double scaled_sum() const noexcept { return sum_.value(); }
    double scaled_sum_sq() const noexcept { return sum_sq_.value(); }
    /// Unscaled Σw (may underflow).
    double sum() const noexcept;

private:
    struct Neumaier {
        double s = 0.0;
        double c = 0.0;
        void add(double v) noexcept;
        void scale(double f) noexcept { s *= f; c *= f; }
        double value() const noexcept { return s + c; }
    };

    void add_scaled(double mantissa, int exponent);
    void rescale_to(int new_shift);

    Neumaier sum_;
    Neumaier sum_sq_;
    std::size_t count_ = 0;
    std::size_t hits_ = 0;
    int shift_ = 0;
};

struct EstimateReport {
    Method method = Method::IS;
    double estimate = 0.0;
    double std_dev = 0.0;
    double cov_sample = 0.0;  ///< Std/Est, per replication
    double cov_mean = 0.0;    ///< Std/(Est·√N), of the averaged estimator
    std::size_t n_reps = 0;
    std::size_t hits = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool zero_hits = false;
    VarianceForm variance_form = VarianceForm::Population;
};

/// Est = Σw/N, Std = √(Σw²/N − Est²) (or the N−1 form); C.O.V.s are +∞
/// when Est = 0. IS reports a normal 95% interval clamped at 0, naive MC a
/// Wilson interval.
EstimateReport finalize(const MomentAccumulator& acc, Method method,
                        VarianceForm form = VarianceForm::Population);

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    VarianceForm variance_form = VarianceForm::Population;
};

/// Evaluates fn(i) for i in [0, count) on `workers` threads and stores the
/// results by index. The first exception (lowest index) is rethrown.
std::vector<double> parallel_map(std::size_t count, std::size_t workers, const std::function<double(std::size_t)>& fn);

/// Log-weights of N IS replications; replication i uses stream
/// derive_seed(seed, i), so the result does not depend on the worker count.
std::vector<double> is_log_weights(const TiltedSampler& sampler, std::size_t n_reps, const RunOptions& opts);

/// Indicator weights (0 or 1) of N direct draws.
std::vector<double> naive_indicators(const EnsembleParams& params, const Threshold& threshold, TiltTarget target,
                                     std::size_t n_reps, const RunOptions& opts);

/// Sequential accumulation in index order of the first `count` entries.
MomentAccumulator accumulate_log(const std::vector<double>& log_weights, std::size_t count);
MomentAccumulator accumulate(const std::vector<double>& weights, std::size_t count);

EstimateReport estimate_is(const EnsembleParams& params, const TiltConfig& cfg, std::size_t n_reps,
                           const RunOptions& opts);

/// Fraction of draws whose extremal eigenvalue crosses the threshold,
/// compared in λ coordinates (thresholds outside (0, 1) are allowed).
EstimateReport naive_mc(const EnsembleParams& params, const Threshold& threshold, TiltTarget target,
                        std::size_t n_reps, const RunOptions& opts);

struct Comparison {
    double z_score = 0.0;
    bool inconclusive = false;
};

/// z = (Est_a − Est_b)/√(SE_a² + SE_b²), SE = Std/√N. Inconclusive when
/// either side has no hits or both standard errors vanish.
Comparison compare(const EstimateReport& a, const EstimateReport& b);

struct CovPoint {
    std::size_t n = 0;
    double cov = 0.0;
};

/// Per-sample C.O.V. after each checkpoint, from log-weights in index order.
std::vector<CovPoint> cov_curve(const std::vector<double>& log_weights, const std::vector<std::size_t>& checkpoints,
                                VarianceForm form = VarianceForm::Population);

/// About `count` log-spaced integers from `first` to `last`, deduplicated,
/// always including both ends.
std::vector<std::size_t> log_spaced_checkpoints(std::size_t first, std::size_t last, std::size_t count);

}  // namespace jrare
