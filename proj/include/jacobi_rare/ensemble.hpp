#pragma once

#include <cstddef>
#include <vector>

#include "jacobi_rare/random.hpp"

namespace jrare {

/// Finite-n parameters of the β-Jacobi ensemble J_n(p1, p2).
///
/// p1 and p2 may be non-integer; they only enter through Beta shapes and
/// Gamma arguments.
class EnsembleParams {
public:
    /// Throws ParameterError unless beta > 0, n >= 1, p1 >= n and p2 >= n.
    EnsembleParams(double beta, std::size_t n, double p1, double p2);

    double beta() const noexcept { return beta_; }
    std::size_t n() const noexcept { return n_; }
    double p1() const noexcept { return p1_; }
    double p2() const noexcept { return p2_; }
    double p() const noexcept { return p1_ + p2_; }

    /// s1 = √(n p1)/p1.
    double s1() const noexcept;
    /// s2 = √(n p1)/p2.
    double s2() const noexcept;
    /// r1 = β(p1 − n + 1)/2.
    double r1() const noexcept;
    /// r2 = β(p2 − n + 1)/2.
    double r2() const noexcept;

    /// X-scale support of a single eigenvalue: (−1/s1, 1/s2) = (−√(p1/n), p2/√(n p1)).
    double x_lower() const noexcept { return -1.0 / s1(); }
    double x_upper() const noexcept { return 1.0 / s2(); }

    /// J_{n−1}(p1 − 1, p2 − 1), the ensemble under the tilted measures.
    /// Requires n >= 2.
    EnsembleParams reduced() const;

private:
    double beta_;
    std::size_t n_;
    double p1_;
    double p2_;
};

/// Symmetric tridiagonal matrix stored as its two nonzero diagonals.
struct TridiagonalMatrix {
    std::vector<double> diag;
    std::vector<double> offdiag;

    std::size_t size() const noexcept { return diag.size(); }
};

enum class Coordinate { Lambda, X, Z };

/// Eigenvalues of one draw, ascending, tagged with their coordinate system.
struct OrderedSpectrum {
    std::vector<double> values;
    Coordinate coordinate = Coordinate::Lambda;

    double min() const { return values.front(); }
    double max() const { return values.back(); }
};

/// Clamp applied to Beta variates so downstream logarithms stay finite.
inline constexpr double kBetaClamp = 1e-15;

/// Beta(a, b) via the Gamma ratio, evaluated in log space, clamped to
/// [kBetaClamp, 1 − kBetaClamp]. Throws ParameterError for a <= 0 or b <= 0.
double sample_beta(double a, double b, RandomStream& rng);

/// Source of the Beta variates in the tridiagonal recursion. The default
/// draws from `sample_beta`; tests substitute deterministic values.
class BetaSource {
public:
    virtual ~BetaSource() = default;
    virtual double draw(double a, double b) = 0;
};

class StreamBetaSource final : public BetaSource {
public:
    explicit StreamBetaSource(RandomStream& rng) : rng_(rng) {}
    double draw(double a, double b) override { return sample_beta(a, b, rng_); }

private:
    RandomStream& rng_;
};

/// Tridiagonal model whose eigenvalues follow J_n(p1, p2). With
/// c(0) = s(0) = 0 and, for k = 1..n,
///   c(k) ~ Beta(β(p1−k+1)/2, β(p2−k+1)/2),
///   s(k) ~ Beta(β(n−k)/2, β(p1+p2−n−k+1)/2)  (s(n) = 0),
///   diag(k)    = s(k−1)(1−c(k−1)) + c(k)(1−s(k−1)),
///   offdiag(k) = √(c(k)(1−c(k)) s(k)(1−s(k−1)))  for k < n.
TridiagonalMatrix build_tridiagonal(const EnsembleParams& params, BetaSource& source);
TridiagonalMatrix build_tridiagonal(const EnsembleParams& params, RandomStream& rng);

/// All eigenvalues of a symmetric tridiagonal matrix, ascending, by Sturm
/// sequence bisection to 1e-12 relative accuracy (floored at 2·eps·‖T‖).
/// Throws NumericalError if an eigenvalue needs more than 200 bisection steps.
OrderedSpectrum eigenvalues(const TridiagonalMatrix& m);

/// Number of eigenvalues of `m` strictly below `x`.
std::size_t sturm_count(const TridiagonalMatrix& m, double x);

/// One ordered draw from J_n(p1, p2) in λ coordinates.
OrderedSpectrum sample_jacobi(const EnsembleParams& params, RandomStream& rng);

}  // namespace jrare
