#include "jacobi_rare/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "jacobi_rare/error.hpp"

namespace jrare {

EnsembleParams::EnsembleParams(double beta, std::size_t n, double p1, double p2)
    : beta_(beta), n_(n), p1_(p1), p2_(p2) {
    const double nd = static_cast<double>(n);
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ParameterError("beta must be positive and finite, got " + std::to_string(beta));
    }
    if (n < 1) {
        throw ParameterError("n must be at least 1");
    }
    if (!(p1 >= nd) || !(p2 >= nd) || !std::isfinite(p1) || !std::isfinite(p2)) {
        std::ostringstream msg;
        msg << "p1 and p2 must be finite and >= n = " << n << ", got p1 = " << p1 << ", p2 = " << p2;
        throw ParameterError(msg.str());
    }
}

double EnsembleParams::s1() const noexcept {
    return std::sqrt(static_cast<double>(n_) * p1_) / p1_;
}

double EnsembleParams::s2() const noexcept {
    return std::sqrt(static_cast<double>(n_) * p1_) / p2_;
}

double EnsembleParams::r1() const noexcept {
    return beta_ * (p1_ - static_cast<double>(n_) + 1.0) / 2.0;
}

double EnsembleParams::r2() const noexcept {
    return beta_ * (p2_ - static_cast<double>(n_) + 1.0) / 2.0;
}

EnsembleParams EnsembleParams::reduced() const {
    if (n_ < 2) {
        throw ParameterError("reduced ensemble J_{n-1}(p1-1, p2-1) needs n >= 2");
    }
    return EnsembleParams(beta_, n_ - 1, p1_ - 1.0, p2_ - 1.0);
}

double sample_beta(double a, double b, RandomStream& rng) {
    if (!(a > 0.0) || !(b > 0.0)) {
        std::ostringstream msg;
        msg << "sample_beta: shapes must be positive, got a = " << a << ", b = " << b;
        throw ParameterError(msg.str());
    }
    const double log_ga = rng.log_gamma_variate(a);
    const double log_gb = rng.log_gamma_variate(b);
    // G_a / (G_a + G_b) = 1 / (1 + exp(log G_b − log G_a))
    const double x = 1.0 / (1.0 + std::exp(log_gb - log_ga));
    return std::clamp(x, kBetaClamp, 1.0 - kBetaClamp);
}

TridiagonalMatrix build_tridiagonal(const EnsembleParams& params, BetaSource& source) {
    const std::size_t n = params.n();
    const double half_beta = params.beta() / 2.0;
    const double nd = static_cast<double>(n);

    TridiagonalMatrix m;
    m.diag.resize(n);
    m.offdiag.resize(n - 1);

    double c_prev = 0.0;
    double s_prev = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double c = source.draw(half_beta * (params.p1() - kd + 1.0), half_beta * (params.p2() - kd + 1.0));
        // Beta(0, ·) is the point mass at 0.
        const double s = (k < n) ? source.draw(half_beta * (nd - kd), half_beta * (params.p() - nd - kd + 1.0)) : 0.0;
        m.diag[k - 1] = s_prev * (1.0 - c_prev) + c * (1.0 - s_prev);
        if (k < n) {
            m.offdiag[k - 1] = std::sqrt(c * (1.0 - c) * s * (1.0 - s_prev));
        }
        c_prev = c;
        s_prev = s;
    }
    return m;
}

TridiagonalMatrix build_tridiagonal(const EnsembleParams& params, RandomStream& rng) {
    StreamBetaSource source(rng);
    return build_tridiagonal(params, source);
}

namespace {

double pivot_floor(const TridiagonalMatrix& m) {
    double max_e2 = 1.0;
    for (double e : m.offdiag) {
        max_e2 = std::max(max_e2, e * e);
    }
    return std::numeric_limits<double>::min() * max_e2;
}

std::size_t sturm_count_with_pivot(const TridiagonalMatrix& m, double x, double pivmin) {
    std::size_t count = 0;
    double q = m.diag[0] - x;
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < m.diag.size(); ++i) {
        const double e = m.offdiag[i - 1];
        q = m.diag[i] - x - e * e / q;
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

}  // namespace

std::size_t sturm_count(const TridiagonalMatrix& m, double x) {
    if (m.diag.empty()) return 0;
    return sturm_count_with_pivot(m, x, pivot_floor(m));
}

OrderedSpectrum eigenvalues(const TridiagonalMatrix& m) {
    const std::size_t n = m.size();
    if (n == 0 || m.offdiag.size() + 1 != n) {
        std::ostringstream msg;
        msg << "eigenvalues: malformed tridiagonal matrix (diag " << n << ", offdiag " << m.offdiag.size() << ")";
        throw ParameterError(msg.str());
    }

    // Gershgorin interval.
    double lower = std::numeric_limits<double>::infinity();
    double upper = -lower;
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double radius = (i > 0 ? std::abs(m.offdiag[i - 1]) : 0.0) + (i + 1 < n ? std::abs(m.offdiag[i]) : 0.0);
        lower = std::min(lower, m.diag[i] - radius);
        upper = std::max(upper, m.diag[i] + radius);
        norm = std::max(norm, std::abs(m.diag[i]) + radius);
    }
    const double abs_floor = 2.0 * std::numeric_limits<double>::epsilon() * std::max(norm, std::numeric_limits<double>::min());
    lower -= abs_floor;
    upper += abs_floor;

    constexpr double kRelTol = 1e-12;
    constexpr int kMaxIter = 200;
    const double pivmin = pivot_floor(m);

    OrderedSpectrum out;
    out.coordinate = Coordinate::Lambda;
    out.values.resize(n);
    double floor_k = lower;
    for (std::size_t k = 0; k < n; ++k) {
        // Invariant: count(lo) <= k < count(hi).
        double lo = floor_k;
        double hi = upper;
        int iter = 0;
        while (hi - lo > std::max(kRelTol * std::max(std::abs(lo), std::abs(hi)), abs_floor)) {
            if (++iter > kMaxIter) {
                std::ostringstream msg;
                msg << "eigenvalues: bisection did not converge for eigenvalue " << k << " of a " << n << "x" << n
                    << " tridiagonal matrix";
                throw NumericalError(msg.str());
            }
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (sturm_count_with_pivot(m, mid, pivmin) > k) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.values[k] = 0.5 * (lo + hi);
        floor_k = lo;
    }
    return out;
}

OrderedSpectrum sample_jacobi(const EnsembleParams& params, RandomStream& rng) {
    return eigenvalues(build_tridiagonal(params, rng));
}

}  // namespace jrare
