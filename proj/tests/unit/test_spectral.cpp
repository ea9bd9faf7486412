#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "jacobi_rare/error.hpp"
#include "jacobi_rare/spectral.hpp"
#include "oracles.hpp"

using namespace jrare;

namespace {

std::vector<LimitRegime> sample_regimes() {
    return {LimitRegime::make(0.5, 0.5), LimitRegime::make(0.2, 2.0), LimitRegime::make(0.5, 0.0),
            LimitRegime::make(1.0, 0.0), LimitRegime::make(0.0, 0.5), LimitRegime::make(0.0, 0.0)};
}

}  // namespace

TEST_CASE("regime classification and validation") {
    CHECK(LimitRegime::make(0.5, 0.5).kind() == RegimeCase::Interior);
    CHECK(LimitRegime::make(0.5, 0.0).kind() == RegimeCase::SigmaZero);
    CHECK(LimitRegime::make(0.0, 0.0).kind() == RegimeCase::GammaZero);
    CHECK(LimitRegime::make(0.0, 3.0).kind() == RegimeCase::GammaZero);
    CHECK_THROWS_AS(LimitRegime::make(0.5, 2.0), RegimeError);
    CHECK_THROWS_AS(LimitRegime::make(1.0, 0.5), RegimeError);
    CHECK_THROWS_AS(LimitRegime::make(1.5, 0.0), RegimeError);
    CHECK_THROWS_AS(LimitRegime::make(-0.1, 0.0), RegimeError);

    const auto r = limit_regime(EnsembleParams(2.0, 4, 400, 400));
    CHECK(r.kind() == RegimeCase::GammaZero);
    CHECK(r.sigma() == 1.0);
    const auto q = limit_regime(EnsembleParams(2.0, 10, 20, 40));
    CHECK(q.gamma() == 0.5);
    CHECK(q.sigma() == 0.5);
}

TEST_CASE("support edges") {
    const auto e = support_edges(LimitRegime::make(0.5, 0.5));
    CHECK(e.u_tilde_2 == Catch::Approx((0.5 * std::sqrt(0.5) + 2 * std::sqrt(1.25)) / 1.5));
    CHECK(e.u_tilde_1 == Catch::Approx((0.5 * std::sqrt(0.5) - 2 * std::sqrt(1.25)) / 1.5));
    const auto mp = support_edges(LimitRegime::make(0.25, 0.0));
    CHECK(mp.u_tilde_2 == Catch::Approx(2.5));
    CHECK(mp.u_tilde_1 == Catch::Approx(-1.5));
    const auto sc = support_edges(LimitRegime::make(0.0, 1.0));
    CHECK(sc.u_tilde_2 == Catch::Approx(std::sqrt(2.0)));
    CHECK(sc.u_tilde_1 == Catch::Approx(-std::sqrt(2.0)));
}

TEST_CASE("limit density is a probability density on the support") {
    for (const auto& r : sample_regimes()) {
        const auto e = support_edges(r);
        INFO("gamma = " << r.gamma() << ", sigma = " << r.sigma());
        // Nodes within ~1e-16 of a hard edge (γ = 1) round onto it, costing ~√1e-16 of mass.
        const double tol = r.gamma() == 1.0 ? 1e-7 : 1e-10;
        const double mass = oracle::integrate([&](double x) { return nu_tilde_density(x, r); }, e.u_tilde_1, e.u_tilde_2);
        CHECK(mass == Catch::Approx(1.0).epsilon(tol));
        const double mean = oracle::integrate([&](double x) { return x * nu_tilde_density(x, r); }, e.u_tilde_1, e.u_tilde_2);
        CHECK(mean == Catch::Approx(0.0).margin(tol));
        CHECK(nu_tilde_density(e.u_tilde_2 + 1e-3, r) == 0.0);
        CHECK(nu_tilde_density(e.u_tilde_1 - 1e-3, r) == 0.0);
    }
}

TEST_CASE("phi is the limit of its finite-n counterpart") {
    const auto r = LimitRegime::make(0.5, 0.5);
    const EnsembleParams big(2.0, 100000, 200000, 400000);
    for (double x : {-1.2, 0.0, 1.0, 2.5}) {
        CHECK(phi_finite_n(x, big, 1.0) == Catch::Approx(phi(x, r)).margin(1e-4));
    }
    CHECK_THROWS_AS(phi(3.0, r), DomainError);
    CHECK_THROWS_AS(phi(-1.5, r), DomainError);
    CHECK_THROWS_AS(phi_finite_n(0.0, EnsembleParams(2.0, 3, 5, 5), 3.0), ParameterError);
}

TEST_CASE("Stieltjes transform agrees with quadrature") {
    for (const auto& r : sample_regimes()) {
        const auto e = support_edges(r);
        INFO("gamma = " << r.gamma() << ", sigma = " << r.sigma());
        for (std::complex<double> z : {std::complex<double>(0.3, 0.7), {e.u_tilde_2 + 0.5, 0.0},
                                       {e.u_tilde_1 - 0.25, 0.0}, {-1.0, -0.2}, {4.0, 3.0}}) {
            const double re = oracle::integrate(
                [&](double y) { return nu_tilde_density(y, r) * std::real(1.0 / (y - z)); }, e.u_tilde_1, e.u_tilde_2);
            const double im = oracle::integrate(
                [&](double y) { return nu_tilde_density(y, r) * std::imag(1.0 / (y - z)); }, e.u_tilde_1, e.u_tilde_2);
            const auto s = stieltjes(z, r);
            INFO("z = " << z);
            CHECK(s.real() == Catch::Approx(re).margin(1e-9));
            CHECK(s.imag() == Catch::Approx(im).margin(1e-9));
        }
        CHECK_THROWS_AS(stieltjes({0.5 * (e.u_tilde_1 + e.u_tilde_2), 0.0}, r), DomainError);
    }
}

TEST_CASE("support indicator") {
    const auto e = support_edges(LimitRegime::make(0.5, 0.5));
    CHECK(support_indicator({0.0, 1.0}, e) == 1);
    CHECK(support_indicator({0.0, -1.0}, e) == -1);
    CHECK(support_indicator({e.u_tilde_2 + 0.1, 0.0}, e) == 1);
    CHECK(support_indicator({e.u_tilde_1 - 0.1, 0.0}, e) == -1);
    CHECK(support_indicator({0.0, 0.0}, e) == 0);
}

TEST_CASE("rate derivatives match finite differences and vanish at the edges") {
    for (const auto& r : sample_regimes()) {
        const RateFunctions rf(r);
        const auto& e = rf.edges();
        INFO("gamma = " << r.gamma() << ", sigma = " << r.sigma());
        CHECK(rf.rate_max(e.u_tilde_2) == 0.0);
        CHECK(rf.derivative_max(e.u_tilde_2) == 0.0);
        CHECK(rf.rate_min(e.u_tilde_1) == 0.0);
        CHECK(rf.derivative_min(e.u_tilde_1) == 0.0);
        CHECK(rf.rate_max(e.u_tilde_2 - 0.1) == kInfiniteRate);
        CHECK(rf.rate_min(e.u_tilde_1 + 0.1) == kInfiniteRate);

        const double h = 1e-4;
        for (double d : {0.1, 0.4}) {
            const double xm = e.u_tilde_2 + d;
            if (xm + h < r.domain_upper()) {
                const double fd = (rf.rate_max(xm + h) - rf.rate_max(xm - h)) / (2 * h);
                CHECK(rf.derivative_max(xm) == Catch::Approx(fd).margin(1e-6));
                CHECK(rf.rate_max(xm) > 0.0);
            }
            const double xn = e.u_tilde_1 - d;
            if (xn - h > r.domain_lower()) {
                const double fd = (rf.rate_min(xn - h) - rf.rate_min(xn + h)) / (2 * h);
                CHECK(rf.derivative_min(xn) == Catch::Approx(fd).margin(1e-6));
            }
        }
    }
}

TEST_CASE("rate functions agree with the log-potential form") {
    for (const auto& r : sample_regimes()) {
        const RateFunctions rf(r);
        const auto& e = rf.edges();
        INFO("gamma = " << r.gamma() << ", sigma = " << r.sigma());
        for (double d : {0.05, 0.3, 0.7}) {
            const double xm = e.u_tilde_2 + d;
            if (xm < r.domain_upper()) CHECK(rf.rate_max(xm) == Catch::Approx(rf.direct_rate(xm)).margin(1e-8));
            const double xn = e.u_tilde_1 - d;
            if (xn > r.domain_lower()) CHECK(rf.rate_min(xn) == Catch::Approx(rf.direct_rate(xn)).margin(1e-8));
        }
        // The direct form vanishes on the edges.
        CHECK(rf.direct_rate(e.u_tilde_2) == Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("reference values of J at gamma = sigma = 1/2") {
    const RateFunctions rf(LimitRegime::make(0.5, 0.5));
    CHECK(rf.rate_max(rf.edges().u_tilde_2 + 0.3) == Catch::Approx(0.19207).margin(5e-5));
    CHECK(rf.rate_max(rf.edges().u_tilde_2 + 0.4) == Catch::Approx(0.31572).margin(5e-5));
}

TEST_CASE("z constant in the degenerate cases") {
    CHECK(z_const(LimitRegime::make(0.5, 0.0)) == 0.5);
    CHECK(z_const(LimitRegime::make(0.0, 1.0)) == Catch::Approx(0.5 * std::log(2.0) + 0.5));
    // Continuity of the interior formula towards both boundaries.
    CHECK(z_const(LimitRegime::make(0.5, 1e-7)) == Catch::Approx(0.5).margin(1e-6));
    CHECK(z_const(LimitRegime::make(1e-7, 1.0)) == Catch::Approx(0.5 * std::log(2.0) + 0.5).margin(1e-6));
}
