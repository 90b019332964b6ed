// One line per acceptance criterion. Exit status is the number of failures.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sawtrap/classical.hpp"
#include "sawtrap/gaussian_qme.hpp"
#include "sawtrap/hill_floquet.hpp"
#include "sawtrap/hubbard.hpp"
#include "sawtrap/scales.hpp"
#include "sawtrap/units.hpp"

using namespace sawtrap;
using units::hbar;
using units::pi;

namespace {

int failures = 0;

struct Result {
    bool pass = false;
    std::string detail;
};

void report(int id, const char* name, double budget_s, const std::function<Result()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt < budget_s;
    const bool ok = r.pass && in_time;
    failures += !ok;
    std::printf("[%s] %2d %s: %s; runtime %.2f s (budget %g s)\n", ok ? "PASS" : "FAIL", id, name, r.detail.c_str(), dt,
                budget_s);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... a) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, a...);
    return buf;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

std::vector<double> range(double a, double b, double step) {
    std::vector<double> v;
    for (int i = 0; a + i * step <= b + 1e-12; ++i) v.push_back(a + i * step);
    return v;
}

// Fig. 3 setup: holes in GaN at 50 GHz, q = 0.47.
struct Fig3 {
    double omega = 2.0 * pi * 50.0;
    double m = units::mass_from_m0(1.1);
    FloquetMode mode = physical_mode(0.47, omega);
    BathParams bath = BathParams::from_kT(1e-3 * mode.omega0, 0.1 * hbar * mode.omega0);
    MomentState s0 = MomentState::coherent_scaled(0.0, 0.01, m, mode.omega0);
    double T = 2.0 * pi / omega;
};

Result c1_table() {
    struct Row {
        const char* name;
        double v, printed;
    };
    const Row rows[] = {{"electrons in GaAs", 3000, 1.7},      {"heavy holes in GaAs", 12000, 184},
                        {"heavy holes in GaAs", 18000, 415},   {"electrons in Si", 12000, 82},
                        {"electrons in Si", 18000, 184},       {"holes in GaN", 12000, 450},
                        {"holes in GaN", 18000, 1010},         {"electrons in MoS2", 12000, 274},
                        {"electrons in MoS2", 18000, 617},     {"trions in MoS2", 12000, 794},
                        {"trions in MoS2", 18000, 1787}};
    const auto presets = builtin_presets();
    double worst = 0.0;
    bool ok = presets.size() == 6;
    for (const auto& r : rows) {
        const double es = sound_energy(find_preset(presets, r.name).at(r.v));
        const double rel = std::abs(es - r.printed) / r.printed;
        worst = std::max(worst, rel);
        ok = ok && rel <= 0.05;
    }
    return {ok, fmt("%zu presets, 11 endpoints, worst relative deviation %.2f%% (tol 5%%)", presets.size(), 100 * worst)};
}

Result c2_case_study() {
    const auto rows = case_study();
    auto span = [&](auto get) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& r : rows) lo = std::min(lo, get(r)), hi = std::max(hi, get(r));
        return std::pair{lo, hi};
    };
    struct Entry {
        const char* name;
        double value, printed, digit;
    };
    std::vector<Entry> e;
    auto add = [&](const char* n, std::pair<double, double> got, double plo, double phi, double dlo, double dhi) {
        e.push_back({n, got.first, plo, dlo});
        e.push_back({n, got.second, phi, dhi});
    };
    add("hbar_omega", span([](auto& r) { return r.scales.hbar_omega; }), 207, 207, 1, 1);
    add("hbar_omega0", span([](auto& r) { return r.scales.hbar_omega0; }), 37, 51, 1, 1);
    add("V0", span([](auto& r) { return r.scales.V0; }), 31, 61, 1, 1);
    add("n_b", span([](auto& r) { return r.scales.n_b; }), 0.85, 1.2, 0.01, 0.1);
    add("a", span([](auto& r) { return r.scales.lattice_a; }), 180, 180, 1, 1);
    add("t", span([](auto& r) { return r.hubbard.t_hop; }), 0.7, 1.8, 0.1, 0.1);
    add("U", span([](auto& r) { return r.hubbard.U_onsite; }), 5, 270, 1, 10);
    bool ok = true;
    std::string worst;
    double worst_frac = 0.0;
    for (const auto& x : e) {
        const double tol = std::max(x.digit, 0.05 * x.printed);
        const double frac = std::abs(x.value - x.printed) / tol;
        ok = ok && frac <= 1.0;
        if (frac > worst_frac) worst_frac = frac, worst = fmt("%s %.4g vs %g", x.name, x.value, x.printed);
    }
    return {ok, fmt("%zu entries; tightest %s (%.0f%% of allowance)", e.size(), worst.c_str(), 100 * worst_frac)};
}

Result c3_boundaries() {
    const auto drive = DriveConfig::monochromatic_drive(1.0, 0.0);
    const auto w = stability_boundaries(0.0, 8.0, drive);
    double edge = NAN, lo = NAN, hi = NAN;
    for (const auto& s : w) {
        if (s.q_lo == 0.0) edge = s.q_hi;
        if (s.q_lo > 7.0 && s.q_hi < 8.0) lo = s.q_lo, hi = s.q_hi;
    }
    double worst = 0.0;
    for (double q = 0.05; q <= 0.8 + 1e-12; q += 0.01) {
        const double beta = characteristic_exponent(q).beta;
        worst = std::max(worst, std::abs(monodromy(q, drive).trace - 2.0 * std::cos(pi * beta)));
    }
    const bool ok = edge >= 0.905 && edge <= 0.911 && within(lo, 7.5, 0.05) && within(hi, 7.6, 0.05) && worst <= 1e-8;
    return {ok, fmt("first edge %.6f, exotic window [%.6f, %.6f], max |trace - 2cos(pi beta)| %.2e over q in [0.05, 0.8]", edge,
                    lo, hi, worst)};
}

Result c4_secular() {
    const double omega = 2.0 * pi * 50.0;
    const double r = physical_mode(0.47, omega).omega0 / omega;
    const double r_rk4 = oracle::rk4_mode(-0.47, omega).omega0 / omega;
    return {within(r, 0.17, 0.01) && within(r, r_rk4, 1e-8), fmt("omega0/omega = %.5f (RK4 oracle %.5f), target 0.17 +- 0.01", r, r_rk4)};
}

Result c5_diagram() {
    const auto drive = DriveConfig::monochromatic_drive(1.0, 0.0);
    DiagramOptions opt;
    opt.samples_per_cell = 32;
    const auto low = stability_diagram(range(0.1, 0.8, 0.1), range(0.005, 0.06, 0.005), drive, opt);
    const auto high = stability_diagram(range(7.52, 7.58, 0.02), range(0.02, 0.3, 0.02), drive, opt);
    const double tl = lobe_max_theta(low, 0.0, 1.0);
    const double th = lobe_max_theta(high, 7.5, 7.6);
    const bool ok = tl >= 0.015 && tl <= 0.06 && th >= 0.075 && th <= 0.30;
    return {ok, fmt("low lobe max k_BT/E_S %.3f (target 0.03, factor 2), high lobe %.3f (target 0.15, factor 2); 32 samples/cell, "
                    "%zu cells",
                    tl, th, low.cells.size() + high.cells.size())};
}

Result c6_fraction() {
    const double f = trapped_fraction(0.01);
    const auto [mc, sigma] = oracle::mc_trapped_fraction(100000, 20240601);
    const bool ok = within(f, 0.6827, 1e-4) && std::abs(mc - f) <= 3.0 * sigma;
    return {ok, fmt("quadrature %.6f (0.6827 +- 1e-4); Monte Carlo 1e5 draws %.5f, |diff| = %.2f sigma", f, mc,
                    std::abs(mc - f) / sigma)};
}

Result c7_fock() {
    const Fig3 p;
    const auto ode = assemble_moment_ode(p.mode, p.m, p.bath);
    const double t_end = 10.0 * 2.0 * pi / p.mode.omega0;
    const auto g = propagate_moments(p.s0, ode, t_end, p.T / 8);
    FockOptions fo;
    fo.n_max = 40;
    const auto f = fock_oracle(p.mode, p.m, p.bath, p.s0, t_end, p.T / 8, fo);
    const double err = relative_moment_error(g, f);
    std::string doublings;
    for (const auto& [n, ch] : f.doublings) doublings += fmt(" %d->%d: %.1e;", n, 2 * n, ch);
    return {err <= 1e-4, fmt("10 secular periods, Fock basis %d (started at %d, doublings:%s) vs Gaussian: max relative error %.2e "
                             "(tol 1e-4)",
                             f.n_max, f.n_max_start, doublings.c_str(), err)};
}

Result c8_quasistationary() {
    const Fig3 p;
    const auto ode = assemble_moment_ode(p.mode, p.m, p.bath);
    const auto traj = propagate_moments(p.s0, ode, 8.0 / p.bath.gamma, p.T / 16);
    const auto qs = detect_quasistationary(traj, p.omega);
    const bool ok = qs.quasi_stationary && within(qs.period_tau, pi, 1e-12) && qs.deviation < 1e-3;
    return {ok, fmt("after 8/gamma: period %.6f in tau, consecutive-period deviation %.2e (tol 1e-3)", qs.period_tau, qs.deviation)};
}

Result c9_heating() {
    const double omega = 2.0 * pi * 50.0;
    bool ok = true;
    double prev = 0.0;
    std::string s;
    double worst_oracle = 0.0;
    for (double q : {0.01, 0.1, 0.2, 0.3, 0.4}) {
        const auto mode = physical_mode(q, omega);
        const auto ke = averaged_kinetic_energy(mode);
        const double ratio = ke.total / ke.zero_point;
        const double ref = oracle::kinetic_energy(oracle::rk4_mode(-q, omega), hbar) / ke.zero_point;
        worst_oracle = std::max(worst_oracle, std::abs(ratio - ref) / ref);
        ok = ok && ratio >= 1.9 && ratio <= 2.5 && ratio > prev;
        prev = ratio;
        s += fmt(" %.2f:%.5f", q, ratio);
    }
    ok = ok && worst_oracle <= 1e-6;
    const double r0 = averaged_kinetic_energy(physical_mode(0.01, omega)).total / (0.25 * hbar * physical_mode(0.01, omega).omega0);
    ok = ok && within(r0, 2.0, 1e-3);
    return {ok, fmt("E_kin/(hbar omega0/4) at q =%s; band [1.9, 2.5], -> 2 as q -> 0; c2n sum vs RK4 time average %.1e", s.c_str(),
                    worst_oracle)};
}

Result c10_hubbard() {
    const double t = tunneling(0.908, 1.0, 1.0);
    const double U = coulomb_onsite(300.0, 12.5).U;
    const double Us = coulomb_onsite(300.0, 12.5, 90.0).U;
    const bool ok = within(t, 3.0e-3, 3.0e-4) && within(U, 380.0, 0.03 * 380.0) && within(Us, 50.0, 0.15 * 50.0);
    return {ok, fmt("t/E_S = %.4e (3.0e-3 +- 10%%), U = %.1f ueV (380 +- 3%%), screened U = %.1f ueV (50 +- 15%%)", t, U, Us)};
}

Result c11_physicality() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> U01(0.0, 1.0);
    const int cases = 200;
    const double omega = 2.0 * pi * 50.0;
    const double m = units::mass_from_m0(1.1);
    double w_unc = 0.0, w_wr = 0.0, w_sum = 0.0, w_det = 0.0, w_decay = 0.0;
    for (int c = 0; c < cases; ++c) {
        const double q = 0.05 + 0.8 * U01(rng);
        const auto mode = physical_mode(q, omega);
        // Wronskian and sum rule.
        w_sum = std::max(w_sum, std::abs(mode.sum_rule() - 1.0));
        for (int k = 0; k < 4; ++k) {
            const double t = 20.0 * U01(rng) / mode.omega0;
            w_wr = std::max(w_wr, std::abs(wronskian(mode, t) - std::complex<double>(0.0, 2.0 * mode.omega0)) / (2.0 * mode.omega0));
        }
        // Monodromy determinant for a random two-tone drive.
        DriveConfig d;
        d.stability_q = q;
        d.dc_a = 0.2 * (U01(rng) - 0.5);
        d.harmonics = {{1, 1.0}, {1 + static_cast<int>(3 * U01(rng)) + 1, U01(rng)}};
        w_det = std::max(w_det, std::abs(monodromy(q, d).determinant() - 1.0));
        // Moments: uncertainty along the trajectory and γ/2 decay of <C_S>.
        const auto bath = BathParams::from_kT((1e-3 + 0.05 * U01(rng)) * mode.omega0, 0.3 * U01(rng) * hbar * mode.omega0);
        const auto s0 = MomentState::displaced_thermal((U01(rng) - 0.5) * std::sqrt(hbar / (m * mode.omega0)),
                                                       (U01(rng) - 0.5) * std::sqrt(hbar * m * mode.omega0), 0.5 * U01(rng),
                                                       m, mode.omega0);
        const auto ode = assemble_moment_ode(mode, m, bath);
        const auto traj = propagate_moments(s0, ode, 3.0 * 2.0 * pi / mode.omega0, 2.0 * pi / omega);
        const auto amp = [&](const MomentSample& s) {
            const auto sh = ode.shift(s.t);
            return sh.alpha_x * s.state.mean_x + sh.beta_p * s.state.mean_p;
        };
        const double a0 = std::abs(amp(traj.samples.front()));
        for (const auto& s : traj.samples) {
            const double excess = s.state.uncertainty_excess() / (0.25 * hbar * hbar);
            w_unc = std::max(w_unc, -excess);
            if (a0 > 0.0) w_decay = std::max(w_decay, std::abs(std::abs(amp(s)) / a0 - std::exp(-0.5 * bath.gamma * s.t)));
        }
    }
    const bool ok = w_unc <= 1e-8 && w_wr <= 1e-10 && w_sum <= 1e-10 && w_det <= 1e-9 && w_decay <= 1e-6;
    return {ok, fmt("%d random cases; worst: uncertainty deficit %.1e (1e-8), Wronskian %.1e (1e-10), sum rule %.1e (1e-10), det-1 "
                    "%.1e (1e-9), <C_S> decay vs exp(-gamma t/2) %.1e (1e-6)",
                    cases, w_unc, w_wr, w_sum, w_det, w_decay)};
}

}  // namespace

int main(int argc, char** argv) {
    // Optional list of criterion numbers to run.
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

    if (want(1)) report(1, "Table I sound energies", 1, c1_table);
    if (want(2)) report(2, "case-study table", 1, c2_case_study);
    if (want(3)) report(3, "Mathieu boundaries", 10, c3_boundaries);
    if (want(4)) report(4, "secular frequency", 10, c4_secular);
    if (want(5)) report(5, "stability diagram lobes", 300, c5_diagram);
    if (want(6)) report(6, "trapped fraction", 10, c6_fraction);
    if (want(7)) report(7, "QME vs Fock oracle", 120, c7_fock);
    if (want(8)) report(8, "quasi-stationarity", 60, c8_quasistationary);
    if (want(9)) report(9, "micromotion heating", 10, c9_heating);
    if (want(10)) report(10, "Hubbard numbers", 1, c10_hubbard);
    if (want(11)) report(11, "physicality suite", 120, c11_physicality);
    std::printf("%d failure(s)\n", failures);
    return failures;
}
