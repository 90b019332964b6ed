#include <cmath>
#include <set>

#include <doctest.h>

#include "oracles.hpp"
#include "sawtrap/classical.hpp"
#include "sawtrap/hill_floquet.hpp"

using namespace sawtrap;
using units::pi;

namespace {
const DriveConfig mono = DriveConfig::monochromatic_drive(1.0, 0.0);

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}
}  // namespace

TEST_CASE("trajectory vs fixed-step RK4") {
    const double tau = 20.0;
    const auto ref = oracle::rk4_pendulum(0.4, mono, 0.3, 0.1, tau, 40000);
    const auto tr = integrate_trajectory(0.4, {0.3, 0.1, 0.0}, mono, tau, 0.5);
    REQUIRE(tr.samples.size() == 41);
    for (const auto& s : tr.samples) {
        const auto& r = ref[static_cast<std::size_t>(std::lround(s.tau / tau * 40000))];
        CHECK(s.x_tilde == doctest::Approx(r[1]).epsilon(1e-8).scale(1.0));
        CHECK(s.v_tilde == doctest::Approx(r[2]).epsilon(1e-8).scale(1.0));
    }
}

TEST_CASE("trajectory input validation") {
    CHECK_THROWS_AS(integrate_trajectory(0.4, {}, mono, -1.0, 0.1), ValidationError);
    CHECK_THROWS_AS(integrate_trajectory(0.4, {}, mono, 1.0, 0.0), ValidationError);
}

TEST_CASE("thermal launch classification") {
    CHECK(classify_stability(0.4, 0.02, mono).stable);
    CHECK_FALSE(classify_stability(0.4, 0.03, mono).stable);
    const auto v = classify_stability(0.4, 0.2, mono);
    CHECK_FALSE(v.stable);
    REQUIRE(v.escape_tau.has_value());
    CHECK(v.max_excursion >= pi);
    CHECK_THROWS_AS(classify_stability(0.4, -0.01, mono), ValidationError);
}

TEST_CASE("mean free path criterion") {
    const auto crit = CriterionSpec::mean_free_path(1.0);
    CHECK(crit.threshold() == 1.0);
    const auto v = classify_trajectory(0.4, 0.0, 0.3, mono, 200.0, crit);
    CHECK(v.criterion == StabilityCriterion::mean_free_path);
    CHECK(v.stable == (v.max_excursion < 1.0));
}

TEST_CASE("zero temperature agrees with the linear verdict") {
    // Past the first edge the sin nonlinearity detunes the parametric growth and
    // caps the excursion below pi, independently of x0; those points are stable
    // by the excursion criterion although linearly unstable.
    // Within 0.005 of an edge the growth over tau_max is too slow to decide.
    const double x0 = DiagramOptions{}.probe_displacement;
    const auto windows = stability_boundaries(0.0, 8.0, mono);
    auto near_edge = [&](double q) {
        for (const auto& w : windows)
            if ((w.q_lo > 0.0 && std::abs(q - w.q_lo) < 0.005) || std::abs(q - w.q_hi) < 0.005) return true;
        return false;
    };
    for (int i = 0; i <= 800; ++i) {
        const double q = 0.01 * i;
        const bool lin = monodromy(q, mono).stable;
        const auto v = classify_trajectory(q, x0, 0.0, mono, default_tau_max);
        if (lin == v.stable) continue;
        MESSAGE("q = " << q << ": linear " << lin << ", nonlinear " << v.stable << ", max excursion " << v.max_excursion);
        if (near_edge(q)) continue;
        CHECK(q > first_region_edge);
        CHECK(q < 0.96);
        CHECK_FALSE(lin);
        CHECK(classify_trajectory(q, 0.01 * x0, 0.0, mono, default_tau_max).max_excursion ==
              doctest::Approx(v.max_excursion).epsilon(0.05));
    }
}

TEST_CASE("exotic window needs a small probe") {
    CHECK(classify_trajectory(7.55, 1e-5, 0.0, mono, default_tau_max).stable);
    CHECK_FALSE(classify_trajectory(7.55, 1e-3, 0.0, mono, default_tau_max).stable);
}

TEST_CASE("trapped fraction") {
    CHECK(trapped_fraction(0.01) == doctest::Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-10));
    CHECK(trapped_fraction(0.0) == 1.0);
    CHECK(trapped_fraction_threshold() == doctest::Approx(0.682689492).epsilon(1e-9));
    const auto [p, sigma] = oracle::mc_trapped_fraction(100000, 99);
    CHECK(std::abs(p - trapped_fraction(0.02)) <= 3 * sigma);
}

TEST_CASE("secular approximation") {
    Diagnostics diag;
    const double omega = 2.0;  // t = τ
    const double q = 0.2;
    const double beta = characteristic_exponent(q).beta;
    CHECK(secular_approximation(-q, 0.5, omega, 0.0, &diag) ==
          doctest::Approx(floquet_coefficients(q, omega).c(0) * (1.0 + q / 2)).epsilon(1e-12));
    // The frame equation carries −q. Launched at rest at the turning point.
    const double x0 = 1e-4;
    const double A = x0 / secular_approximation(-q, 1.0, omega, 0.0);
    const double tau_max = 3.0 * 2.0 * pi / beta;
    const auto tr = integrate_trajectory(q, {x0, 0.0, 0.0}, mono, tau_max, 0.05);
    double worst = 0.0;
    for (const auto& s : tr.samples) worst = std::max(worst, std::abs(secular_approximation(-q, A, omega, s.tau) - s.x_tilde));
    CHECK(worst <= 0.05 * x0);
    CHECK(diag.warnings.empty());
    secular_approximation(0.6, 1.0, omega, 0.0, &diag);
    CHECK_FALSE(diag.warnings.empty());
}

TEST_CASE("diagram: serial and parallel identical, rerun identical") {
    DiagramOptions opt;
    opt.tau_max = 100 * pi;
    opt.samples_per_cell = 4;
    const auto qg = grid(0.1, 0.9, 5), tg = grid(0.0, 0.04, 3);
    const auto a = stability_diagram(qg, tg, mono, opt);
    const auto b = stability_diagram_serial(qg, tg, mono, opt);
    const auto c = stability_diagram(qg, tg, mono, opt);
    REQUIRE(a.cells.size() == 15);
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].fraction_stable == b.cells[i].fraction_stable);
        CHECK(a.cells[i].max_excursion_median == b.cells[i].max_excursion_median);
        CHECK(a.cells[i].fraction_stable == c.cells[i].fraction_stable);
    }
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < 1000; ++i) seeds.insert(cell_seed(opt.seed, i));
    CHECK(seeds.size() == 1000);
}

TEST_CASE("diagram: 1x1 grid and validation") {
    const auto d = stability_diagram({0.4}, {0.0}, mono);
    REQUIRE(d.cells.size() == 1);
    CHECK(d.cells[0].stable);
    CHECK(lobe_max_theta(d, 0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(stability_diagram({}, {0.0}, mono), ValidationError);
    CHECK_THROWS_AS(stability_diagram({0.5, 0.4}, {0.0}, mono), ValidationError);
}

TEST_CASE("diagram: statistical monotonicity in temperature") {
    DiagramOptions opt;
    opt.samples_per_cell = 32;
    const auto qg = grid(0.2, 0.8, 4), tg = grid(0.0, 0.06, 7);
    const auto d = stability_diagram(qg, tg, mono, opt);
    for (std::size_t iq = 0; iq < qg.size(); ++iq) {
        std::size_t first_unstable = tg.size(), last_stable = 0;
        for (std::size_t it = 0; it < tg.size(); ++it) {
            if (d.at(iq, it).stable) last_stable = it;
            else if (first_unstable == tg.size()) first_unstable = it;
        }
        CHECK(last_stable <= first_unstable + 1);
    }
}
