#include <cmath>
#include <complex>

#include <doctest.h>

#include "oracles.hpp"
#include "sawtrap/errors.hpp"
#include "sawtrap/gaussian_qme.hpp"
#include "sawtrap/hill_floquet.hpp"
#include "sawtrap/units.hpp"

using namespace sawtrap;
using units::pi;

namespace {
const DriveConfig mono = DriveConfig::monochromatic_drive(1.0, 0.0);
}

TEST_CASE("monodromy matches fixed-step RK4") {
    for (double q : {0.1, 0.47, 0.9, 3.0, 7.55}) {
        const auto M = monodromy(q, mono);
        const auto R = oracle::rk4_monodromy(q, mono);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(M.matrix[i][j] == doctest::Approx(R[i][j]).epsilon(1e-8).scale(1.0));
        CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("two-tone drive: determinant and period") {
    DriveConfig d;
    d.harmonics = {{2, 1.0}, {4, 0.3}};
    CHECK(drive_period_tau(d) == doctest::Approx(pi / 2));
    for (double q : {0.2, 1.0, 2.5}) {
        const auto M = monodromy(q, d);
        CHECK(M.determinant() == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(M.trace == doctest::Approx(oracle::rk4_monodromy(q, d)[0][0] + oracle::rk4_monodromy(q, d)[1][1]).epsilon(1e-7));
    }
}

TEST_CASE("continued fraction exponent vs RK4 trace") {
    for (double q = 0.05; q <= 0.8; q += 0.05) {
        const double beta = characteristic_exponent(q).beta;
        const auto R = oracle::rk4_monodromy(q, mono);
        CHECK(beta == doctest::Approx(oracle::beta_from_trace(R[0][0] + R[1][1])).epsilon(1e-8));
        CHECK(std::abs(continued_fraction_residual(q, beta)) < 1e-10);
    }
}

TEST_CASE("characteristic exponent outside the windows") {
    CHECK_THROWS_AS(characteristic_exponent(1.5), ValidationError);
    const auto ce = characteristic_exponent(7.55);
    CHECK(ce.region == 1);
    CHECK(ce.beta == doctest::Approx(1.5294).epsilon(1e-4));
    CHECK(characteristic_exponent(0.0).beta == 0.0);
}

TEST_CASE("Floquet coefficients vs Fourier projection of the RK4 mode") {
    const double omega = 2 * pi * 50.0;
    for (double q : {-0.47, -0.2, 0.3, -0.8}) {
        const auto mode = floquet_coefficients(q, omega);
        CHECK(mode.sum_rule() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(mode.recursion_residual() < 1e-12);
        const auto ref = oracle::rk4_mode(q, omega);
        CHECK(mode.omega0 == doctest::Approx(ref.omega0).epsilon(1e-9));
        const auto c = oracle::fourier_coefficients(ref, 4);
        const double sign = (mode.c(0) > 0) == (c[4] > 0) ? 1.0 : -1.0;
        for (int n = -4; n <= 4; ++n) CHECK(mode.c(n) == doctest::Approx(sign * c[n + 4]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("mode normalization and Wronskian") {
    const double omega = 2 * pi * 50.0;
    const auto mode = physical_mode(0.47, omega);
    const auto v0 = evaluate_mode(mode, 0.0);
    CHECK(v0.u.imag() == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(v0.u_dot.real() == doctest::Approx(0.0).scale(mode.omega0).epsilon(1e-12));
    CHECK(v0.u.real() * v0.u_dot.imag() == doctest::Approx(mode.omega0).epsilon(1e-10));
    // u(0) = 1 only in the q → 0 limit, approached as 1 − q/2.
    CHECK(v0.u.real() == doctest::Approx(0.787).epsilon(1e-3));
    CHECK(evaluate_mode(physical_mode(0.001, omega), 0.0).u.real() == doctest::Approx(1.0 - 0.0005).epsilon(1e-6));
    for (double t : {0.0, 0.013, 0.5, 3.7}) {
        const auto w = wronskian(mode, t);
        CHECK(w.real() == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
        CHECK(w.imag() == doctest::Approx(2 * mode.omega0).epsilon(1e-10));
    }
}

TEST_CASE("physical mode convention") {
    const double omega = 2 * pi * 50.0;
    const auto p = physical_mode(0.47, omega);
    CHECK(p.q == -0.47);
    CHECK(p.omega0 / omega == doctest::Approx(0.17438).epsilon(1e-4));
    const auto ref = oracle::rk4_mode(-0.47, omega);
    for (std::size_t i = 0; i < ref.t.size(); i += 512) {
        const auto v = evaluate_mode(p, ref.t[i]);
        CHECK(std::abs(v.u - ref.u[i]) < 1e-8);
        CHECK(std::abs(v.u_dot - ref.u_dot[i]) < 1e-8 * omega);
    }
}

TEST_CASE("stability boundaries") {
    const auto w = stability_boundaries(0.0, 8.0, mono);
    const auto s = stability_boundaries_serial(0.0, 8.0, mono);
    REQUIRE(w.size() == s.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(w[i].q_lo == s[i].q_lo);
        CHECK(w[i].q_hi == s[i].q_hi);
    }
    REQUIRE(w.size() >= 2);
    CHECK(w[0].q_lo == 0.0);
    CHECK(w[0].q_hi == doctest::Approx(oracle::rk4_edge(0.9, 0.92, mono)).epsilon(1e-4));
    CHECK(w[0].q_hi == doctest::Approx(0.908046).epsilon(1e-4));
    bool exotic = false;
    for (const auto& x : w)
        if (x.q_lo > 7.4 && x.q_hi < 7.7) {
            exotic = true;
            CHECK(x.q_lo == doctest::Approx(oracle::rk4_edge(7.55, 7.45, mono)).epsilon(1e-4));
            CHECK(x.q_hi == doctest::Approx(oracle::rk4_edge(7.55, 7.65, mono)).epsilon(1e-4));
        }
    CHECK(exotic);
}
