// Acceptance criteria. Run with no arguments for all of them, or with one or
// more criterion numbers. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "jacobi_rare/estimator.hpp"
#include "jacobi_rare/importance.hpp"
#include "jacobi_rare/scaling.hpp"
#include "jacobi_rare/spectral.hpp"
#include "oracles.hpp"

using namespace jrare;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::size_t workers() {
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

TiltConfig tilt(const EnsembleParams& p, TiltTarget t, double x, double mult = 1.0) {
    TiltConfig c;
    c.target = t;
    c.threshold_x = x;
    c.rate_multiplier = mult;
    c.regime = limit_regime(p);
    return c;
}

RunOptions opts(std::uint64_t seed) {
    RunOptions o;
    o.seed = seed;
    o.workers = workers();
    return o;
}

const std::array<LimitRegime, 3> kRegimes = {LimitRegime::make(0.5, 0.5), LimitRegime::make(0.5, 0.0),
                                             LimitRegime::make(0.0, 0.5)};

// 1. n = 1 draws follow Beta(βp1/2, βp2/2).
Outcome sampler_single_eigenvalue() {
    const EnsembleParams p(2.0, 1, 20, 40);
    const std::size_t n = 100000;
    RandomStream rng(1);
    std::vector<double> xs(n);
    for (double& x : xs) x = sample_jacobi(p, rng).values[0];
    const double ks = oracle::ks_statistic(xs, [](double x) { return boost::math::ibeta(20.0, 40.0, x); });
    const double crit = 1.63 / std::sqrt(static_cast<double>(n));
    return {ks < crit, fmt("KS = %.5f, critical = %.5f", ks, crit)};
}

// 2. Averaged X-scaled ESD at n = 200 is close to the limit law in W1.
Outcome empirical_spectral_distribution() {
    const EnsembleParams p(2.0, 200, 400, 800);
    const LimitRegime regime = LimitRegime::make(0.5, 0.5);
    const SupportEdges e = support_edges(regime);
    std::vector<double> pooled;
    for (std::uint64_t d = 0; d < 20; ++d) {
        RandomStream rng = RandomStream::for_replication(99, d);
        for (double v : lambda_to_x(sample_jacobi(p, rng), p).values) pooled.push_back(v);
    }
    std::sort(pooled.begin(), pooled.end());

    const double lo = std::min(pooled.front(), e.u_tilde_1);
    const double hi = std::max(pooled.back(), e.u_tilde_2);
    const std::size_t cells = 5000;
    const double h = (hi - lo) / cells;
    auto density = [&](double y) { return nu_tilde_density(y, regime); };

    double cdf = 0.0;
    double w1 = 0.0;
    std::size_t below = 0;
    for (std::size_t k = 0; k < cells; ++k) {
        const double a = lo + h * k;
        const double b = a + h;
        const double ca = std::max(a, e.u_tilde_1);
        const double cb = std::min(b, e.u_tilde_2);
        const double mass = ca < cb ? oracle::integrate(density, ca, cb) : 0.0;
        const double mid = 0.5 * (a + b);
        while (below < pooled.size() && pooled[below] <= mid) ++below;
        const double emp = static_cast<double>(below) / pooled.size();
        w1 += std::abs(emp - (cdf + 0.5 * mass)) * h;
        cdf += mass;
    }
    return {w1 <= 0.05, fmt("W1 = %.5f (limit 0.05), limit mass = %.12f", w1, cdf)};
}

double five_point(const std::function<double(double)>& f, double x, double h) {
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

// 3. J from its derivative vs the log-potential form; J′ vs finite differences.
Outcome rate_consistency() {
    double worst_direct = 0.0;
    double worst_fd = 0.0;
    std::size_t checked = 0;
    for (const auto& r : kRegimes) {
        const RateFunctions rf(r);
        const auto& e = rf.edges();
        const double up = std::isfinite(r.domain_upper()) ? r.domain_upper() : e.u_tilde_2 + 3.0;
        const double down = std::isfinite(r.domain_lower()) ? r.domain_lower() : e.u_tilde_1 - 3.0;
        for (int k = 0; k < 100; ++k) {
            const double t = 0.05 + 0.85 * k / 99.0;
            const double xm = e.u_tilde_2 + t * (up - e.u_tilde_2);
            const double xn = e.u_tilde_1 - t * (e.u_tilde_1 - down);
            worst_direct = std::max(worst_direct, std::abs(rf.rate_max(xm) - rf.direct_rate(xm)));
            worst_direct = std::max(worst_direct, std::abs(rf.rate_min(xn) - rf.direct_rate(xn)));
            // Steps shrink with the distance to the soft edge and to the domain end.
            const double hm = std::min(1e-3, 0.01 * std::min(up - xm, xm - e.u_tilde_2));
            const double hn = std::min(1e-3, 0.01 * std::min(xn - down, e.u_tilde_1 - xn));
            const double fd_max = five_point([&](double x) { return rf.rate_max(x); }, xm, hm);
            const double fd_min = -five_point([&](double x) { return rf.rate_min(x); }, xn, hn);
            worst_fd = std::max(worst_fd, std::abs(rf.derivative_max(xm) - fd_max));
            worst_fd = std::max(worst_fd, std::abs(rf.derivative_min(xn) - fd_min));
            checked += 2;
        }
    }
    return {worst_direct <= 1e-6 && worst_fd <= 1e-6,
            fmt("%zu points, max |J - direct| = %.2e, max |J' - FD| = %.2e", checked, worst_direct, worst_fd)};
}

// 4. Stieltjes closed form vs quadrature, plus the far field.
Outcome stieltjes_closed_forms() {
    boost::math::quadrature::tanh_sinh<double> ts;
    double worst = 0.0;
    double worst_far = 0.0;
    std::size_t checked = 0;
    for (const auto& r : kRegimes) {
        const auto e = support_edges(r);
        std::vector<std::complex<double>> zs;
        for (int k = 0; k < 5; ++k) {
            const double x = e.u_tilde_1 - 0.5 + (e.u_tilde_2 - e.u_tilde_1 + 1.0) * k / 4.0;
            zs.emplace_back(x, k % 2 == 0 ? 0.3 : -0.3);
            zs.emplace_back(x, k % 2 == 0 ? -1.0 : 1.0);
        }
        for (double d : {0.05, 0.2, 0.5, 0.8, 2.0}) zs.emplace_back(e.u_tilde_2 + d, 0.0);
        for (double d : {0.05, 0.1, 0.3, 0.7, 2.0}) zs.emplace_back(e.u_tilde_1 - d, 0.0);
        for (const auto z : zs) {
            auto part = [&](bool imag) {
                return ts.integrate(
                    [&](double y) {
                        const std::complex<double> k = 1.0 / (y - z);
                        return nu_tilde_density(y, r) * (imag ? k.imag() : k.real());
                    },
                    e.u_tilde_1, e.u_tilde_2, 1e-14);
            };
            const std::complex<double> ref(part(false), part(true));
            worst = std::max(worst, std::abs(stieltjes(z, r) - ref));
            ++checked;
        }
        for (std::complex<double> z : {std::complex<double>(1e6, 0.0), {-1e6, 0.0}, {0.0, 1e6}}) {
            worst_far = std::max(worst_far, std::abs(-z * stieltjes(z, r) - 1.0));
        }
    }
    return {worst <= 1e-8 && worst_far <= 1e-5,
            fmt("%zu points, max error = %.2e, far-field error = %.2e", checked, worst, worst_far)};
}

// 5. log B_n against the factorial value and its first-order asymptotics.
Outcome normalizing_constant() {
    const double small = log_Bn(EnsembleParams(2.0, 2, 2, 2));
    const double err = std::abs(small - std::log(1.5));
    const double ratio = log_Bn(EnsembleParams(2.0, 400, 800, 1600)) / 800.0;
    const double z = z_const(LimitRegime::make(0.5, 0.5));
    return {err <= 1e-10 && std::abs(ratio - z) <= 2e-2,
            fmt("|log B_2 - log 1.5| = %.2e, log B_n/(beta n) = %.5f vs z = %.5f", err, ratio, z)};
}

// 6. IS vs naive MC at a threshold with P ≈ 1e-2.
Outcome is_vs_naive() {
    const EnsembleParams p(2.0, 10, 20, 40);
    const auto edges = support_edges(limit_regime(p));
    const std::size_t scan = 100000;
    std::vector<double> maxima = parallel_map(scan, workers(), [&](std::size_t i) {
        RandomStream rng = RandomStream::for_replication(555, i);
        return sample_jacobi(p, rng).max();
    });
    std::sort(maxima.begin(), maxima.end());
    const double lambda = maxima[static_cast<std::size_t>(0.99 * scan)];
    const double x = lambda_to_x(lambda, p);
    if (!(x > edges.u_tilde_2)) {
        return {false, fmt("pre-scanned threshold X = %.4f is not above the edge %.4f", x, edges.u_tilde_2)};
    }
    const auto is = estimate_is(p, tilt(p, TiltTarget::MaxAbove, x), 10000, opts(7));
    const auto naive = naive_mc(p, {x, Coordinate::X}, TiltTarget::MaxAbove, 1000000, opts(8));
    const auto c = compare(is, naive);
    return {!c.inconclusive && std::abs(c.z_score) <= 3.0,
            fmt("X = %.4f, IS = %.5e, naive = %.5e, z = %.3f", x, is.estimate, naive.estimate, c.z_score)};
}

// 7. C.O.V. curves stabilize; the deeper threshold stabilizes lower.
Outcome cov_curves() {
    const EnsembleParams p(2.0, 10, 20, 40);
    const auto cps = log_spaced_checkpoints(10, 5000, 20);
    std::vector<double> finals;
    std::string detail;
    bool stable = true;
    for (double x_lambda : {0.90, 0.95}) {
        const TiltedSampler s(p, tilt(p, TiltTarget::MaxAbove, lambda_threshold_to_x(x_lambda, p)));
        const auto lw = is_log_weights(s, 5000, opts(31));
        const auto curve = cov_curve(lw, cps);
        const double half = cov_curve(lw, {2500}).front().cov;
        const double final_cov = curve.back().cov;
        const double change = std::abs(final_cov / half - 1.0);
        stable = stable && change <= 0.2;
        finals.push_back(final_cov);
        detail += fmt("x_lambda=%.2f: C.O.V.(2500)=%.4f C.O.V.(5000)=%.4f; ", x_lambda, half, final_cov);
    }
    return {stable && finals[1] < finals[0], detail};
}

// 8. −log P̂/(βn) approaches J(x) as n grows.
Outcome large_deviation_trend() {
    const LimitRegime regime = LimitRegime::make(0.5, 0.5);
    const RateFunctions rf(regime);
    const double x = rf.edges().u_tilde_2 + 0.4;
    const double J = rf.rate_max(x);
    std::vector<double> gaps;
    std::string detail = fmt("J(%.4f) = %.5f; ", x, J);
    double last_ratio = 0.0;
    for (std::size_t n : {10u, 20u, 40u}) {
        const EnsembleParams p(2.0, n, 2.0 * n, 4.0 * n);
        const auto r = estimate_is(p, tilt(p, TiltTarget::MaxAbove, x), 10000, opts(100 + n));
        const double slope = -std::log(r.estimate) / (2.0 * n);
        gaps.push_back(std::abs(slope - J));
        last_ratio = slope / J;
        detail += fmt("n=%zu: P=%.4e slope=%.5f; ", n, r.estimate, slope);
    }
    const bool shrinking = gaps[1] < gaps[0] && gaps[2] < gaps[1];
    const bool within = last_ratio >= 0.5 && last_ratio <= 2.0;
    return {shrinking && within, detail};
}

// 9. Min-side estimator against the max side on a symmetric ensemble.
Outcome min_side_symmetry() {
    const EnsembleParams p(2.0, 4, 400, 400);
    const double x = support_edges(limit_regime(p)).u_tilde_2 + 0.5;
    const auto up = estimate_is(p, tilt(p, TiltTarget::MaxAbove, x), 10000, opts(41));
    const auto down = estimate_is(p, tilt(p, TiltTarget::MinBelow, -x), 10000, opts(42));
    const auto c = compare(up, down);
    return {!c.inconclusive && std::abs(c.z_score) <= 3.0,
            fmt("x = %.4f, P(max > x) = %.5e, P(min < -x) = %.5e, z = %.3f", x, up.estimate, down.estimate,
                c.z_score)};
}

// 10. Estimates do not depend on the tilt-rate multiplier.
Outcome multiplier_robustness() {
    const EnsembleParams p(2.0, 10, 20, 40);
    const double x = lambda_threshold_to_x(0.9, p);
    std::vector<EstimateReport> reps;
    std::string detail;
    std::uint64_t seed = 60;
    for (double m : {0.5, 1.0, 1.5}) {
        reps.push_back(estimate_is(p, tilt(p, TiltTarget::MaxAbove, x, m), 10000, opts(seed++)));
        detail += fmt("m=%.1f: %.5e (C.O.V. %.3f); ", m, reps.back().estimate, reps.back().cov_sample);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            const auto c = compare(reps[i], reps[j]);
            if (c.inconclusive) return {false, detail + "inconclusive comparison"};
            worst = std::max(worst, std::abs(c.z_score));
        }
    }
    return {worst <= 3.0, detail + fmt("max |z| = %.3f", worst)};
}

std::string capture(const std::string& cmd, int& status) {
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    status = pclose(pipe);
    return out;
}

// 11. CLI output is byte-identical across reruns and worker counts.
Outcome cli_determinism() {
    const std::string cli = JACOBI_RARE_CLI_PATH;
    const std::vector<std::string> commands = {
        "sample --n 5 --p1 10 --p2 20 --reps 200 --coord x",
        "sample --n 5 --p1 10 --p2 20 --reps 50 --format json",
        "estimate --n 10 --p1 20 --p2 40 --x 0.95 --coord lambda --reps 3000",
        "estimate --n 10 --p1 20 --p2 40 --x 0.6 --coord lambda --reps 3000 --naive --format csv",
        "estimate --n 10 --p1 20 --p2 40 --x -1.35 --target min-below --reps 3000",
        "sweep --n 10 --p1 20 --p2 40 --coord lambda --x-min 0.85 --x-max 0.95 --points 5 --reps 1000",
        "cov-curve --n 10 --p1 20 --p2 40 --x 0.9 --coord lambda --reps 2000 --points 10",
        "rate-table --n 10 --p1 20 --p2 40 --points 41",
        "compare --n 10 --p1 20 --p2 40 --x 1.8 --reps 2000 --naive-reps 20000",
    };
    std::size_t identical = 0;
    std::string failures;
    for (const auto& c : commands) {
        std::vector<std::string> outs;
        bool ok = true;
        for (const char* w : {"1", "1", "3", "8"}) {
            int status = 0;
            outs.push_back(capture(cli + " " + c + " --seed 4242 --workers " + w, status));
            ok = ok && status == 0 && !outs.back().empty();
        }
        ok = ok && std::all_of(outs.begin(), outs.end(), [&](const std::string& o) { return o == outs[0]; });
        if (ok) {
            ++identical;
        } else {
            failures += " [" + c + "]";
        }
    }
    return {identical == commands.size(),
            fmt("%zu/%zu commands byte-identical over workers {1,1,3,8}", identical, commands.size()) + failures};
}

struct Criterion {
    const char* name;
    double budget_seconds;
    Outcome (*run)();
};

const std::array<Criterion, 11> kCriteria = {{
    {"sampler law, n=1 vs Beta(20,40)", 10, sampler_single_eigenvalue},
    {"ESD convergence, n=200, W1 <= 0.05", 60, empirical_spectral_distribution},
    {"rate-function internal consistency", 30, rate_consistency},
    {"Stieltjes closed forms", 60, stieltjes_closed_forms},
    {"log B_n exactness and asymptotics", 10, normalizing_constant},
    {"IS vs naive MC at P ~ 1e-2", 300, is_vs_naive},
    {"C.O.V. curves stabilize, deeper threshold lower", 180, cov_curves},
    {"large-deviation slope trend", 600, large_deviation_trend},
    {"min-side estimator symmetry", 120, min_side_symmetry},
    {"rate-multiplier robustness", 120, multiplier_robustness},
    {"CLI determinism across worker counts", 120, cli_determinism},
}};

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const long k = std::strtol(argv[i], nullptr, 10);
        if (k < 1 || k > static_cast<long>(kCriteria.size())) {
            std::cerr << "unknown criterion " << argv[i] << '\n';
            return 2;
        }
        selected.push_back(static_cast<std::size_t>(k));
    }
    if (selected.empty()) {
        for (std::size_t k = 1; k <= kCriteria.size(); ++k) selected.push_back(k);
    }

    int failed = 0;
    for (std::size_t k : selected) {
        const Criterion& c = kCriteria[k - 1];
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_seconds) {
            o.pass = false;
            o.detail += fmt(" (over the %.0f s budget)", c.budget_seconds);
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << k << "] " << c.name << ": " << o.detail
                  << fmt(" [%.1f s]", secs) << std::endl;
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
