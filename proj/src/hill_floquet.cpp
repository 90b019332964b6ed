#include "sawtrap/hill_floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/roots.hpp>

#include "sawtrap/errors.hpp"
#include "sawtrap/parallel.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap {

namespace {

using State4 = std::array<double, 4>;

struct HillSystem {
    double a_dc;
    double q;
    const std::vector<Harmonic>* harmonics;

    double coefficient(double tau) const {
        double s = 0.0;
        for (const auto& h : *harmonics) s += h.weight * std::cos(2.0 * h.multiplier * tau);
        return a_dc + 2.0 * q * s;
    }

    void operator()(const State4& x, State4& dx, double tau) const {
        const double f = coefficient(tau);
        dx[0] = x[1];
        dx[1] = -f * x[0];
        dx[2] = x[3];
        dx[3] = -f * x[2];
    }
};

bool is_stable_trace(double trace) { return std::abs(trace) <= 2.0 + trace_slack; }

int auto_depth(double q, int depth) { return depth > 0 ? depth : 30 + 2 * static_cast<int>(std::ceil(std::abs(q))); }

// r_1 = c₂/c₀ (sign = +1) or c₋₂/c₀ (sign = −1) by backward continued fraction.
double first_ratio(double q, double beta, int sign, int depth) {
    double r = 0.0;
    for (int n = depth; n >= 1; --n) {
        const double d = beta + 2.0 * sign * n;
        r = q / (d * d - q * r);
    }
    return r;
}

// Minimal solution with c₀ = 1, truncated at |n| ≤ N.
std::vector<double> build_coefficients(double q, double beta, int N) {
    std::vector<double> c(static_cast<std::size_t>(2 * N + 1), 0.0);
    c[static_cast<std::size_t>(N)] = 1.0;
    for (int sign : {+1, -1}) {
        std::vector<double> ratio(static_cast<std::size_t>(N + 2), 0.0);
        for (int n = N; n >= 1; --n) {
            const double d = beta + 2.0 * sign * n;
            ratio[static_cast<std::size_t>(n)] = q / (d * d - q * ratio[static_cast<std::size_t>(n + 1)]);
        }
        double prev = 1.0;
        for (int n = 1; n <= N; ++n) {
            prev *= ratio[static_cast<std::size_t>(n)];
            c[static_cast<std::size_t>(N + sign * n)] = prev;
        }
    }
    return c;
}

double raw_sum_rule(const std::vector<double>& c, double beta, int N) {
    double s = 0.0;
    for (int n = -N; n <= N; ++n) {
        const double cn = c[static_cast<std::size_t>(n + N)];
        s += cn * cn * (beta + 2.0 * n);
    }
    return s / beta;
}

// Count of stable windows entered on the way from 0 to q (q itself stable).
int region_index(double q) {
    if (q <= first_region_edge) return 0;
    const DriveConfig mono;
    const double h = 0.01;
    int region = 0;
    bool prev = true;
    const int steps = static_cast<int>(std::ceil(q / h));
    for (int i = 1; i <= steps; ++i) {
        const double qi = std::min(i * h, q);
        const bool s = is_stable_trace(monodromy(qi, mono).trace);
        if (s && !prev) ++region;
        prev = s;
    }
    return region;
}

double polish(double q, double beta0) {
    const int depth = auto_depth(q, 0);
    auto F = [&](double b) { return continued_fraction_residual(q, b, depth); };
    double b0 = beta0, b1 = beta0 + 1e-7;
    double f0 = F(b0), f1 = F(b1);
    const double f_start = std::abs(f0);
    for (int it = 0; it < 50 && f1 != f0; ++it) {
        const double b2 = b1 - f1 * (b1 - b0) / (f1 - f0);
        b0 = b1;
        f0 = f1;
        b1 = b2;
        f1 = F(b1);
        if (std::abs(b1 - b0) < 1e-15 * std::max(1.0, std::abs(b1))) break;
    }
    if (std::isfinite(b1) && std::abs(b1 - beta0) < 1e-4 && std::abs(f1) <= f_start) return b1;
    return beta0;
}

}  // namespace

double drive_period_tau(const DriveConfig& drive) {
    int g = 0;
    for (const auto& h : drive.harmonics) g = std::gcd(g, h.multiplier);
    return units::pi / static_cast<double>(std::max(g, 1));
}

MonodromyResult monodromy(double q, const DriveConfig& drive, const ode::Tolerance& tol) {
    drive.validate();
    if (!std::isfinite(q)) throw ValidationError("monodromy: q must be finite");
    const double period = drive_period_tau(drive);
    HillSystem sys{drive.dc_a, q, &drive.harmonics};
    State4 x{1.0, 0.0, 0.0, 1.0};
    ode::integrate_sampled(sys, x, 0.0, period, period, tol, [](double, const State4&) { return true; });

    MonodromyResult r;
    r.matrix = {{{x[0], x[2]}, {x[1], x[3]}}};
    r.trace = x[0] + x[3];
    r.stable = is_stable_trace(r.trace);
    r.q = q;
    r.drive = drive;
    r.drive.stability_q = q;
    return r;
}

double continued_fraction_residual(double q, double beta, int depth) {
    depth = auto_depth(q, depth);
    return beta * beta - q * (first_ratio(q, beta, +1, depth) + first_ratio(q, beta, -1, depth));
}

CharacteristicExponent characteristic_exponent(double q) {
    if (!std::isfinite(q)) throw ValidationError("characteristic_exponent: q must be finite");
    q = std::abs(q);
    if (q == 0.0) return {0.0, 0};

    const auto mono = monodromy(q, DriveConfig{});
    if (!mono.stable) throw ValidationError("unstable drive point: q = " + std::to_string(q));

    CharacteristicExponent out;
    out.region = region_index(q);
    const double beta_trace = std::acos(std::clamp(0.5 * mono.trace, -1.0, 1.0)) / units::pi;

    bool solved = false;
    if (out.region == 0) {
        const int depth = auto_depth(q, 0);
        auto F = [&](double b) { return continued_fraction_residual(q, b, depth); };
        const double f_lo = F(0.0), f_hi = F(1.0);
        if (f_lo < 0.0 && f_hi > 0.0) {
            std::uintmax_t iters = 200;
            auto tol = boost::math::tools::eps_tolerance<double>(52);
            auto [lo, hi] = boost::math::tools::toms748_solve(F, 0.0, 1.0, f_lo, f_hi, tol, iters);
            out.beta = 0.5 * (lo + hi);
            solved = true;
        } else if (f_hi == 0.0) {
            out.beta = 1.0;
            solved = true;
        }
    }
    if (!solved) out.beta = polish(q, beta_trace);

    // Pick the member of {β, 2−β} whose mode has a positive norm.
    if (out.beta > 0.0 && out.beta < 2.0) {
        const auto c = build_coefficients(q, out.beta, 32);
        if (raw_sum_rule(c, out.beta, 32) < 0.0) out.beta = 2.0 - out.beta;
    }
    return out;
}

double FloquetMode::sum_rule() const {
    if (beta_exp == 0.0) return 1.0;
    return raw_sum_rule(coeffs, beta_exp, n_trunc);
}

double FloquetMode::recursion_residual() const {
    double cmax = 0.0;
    for (double v : coeffs) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0) return 0.0;
    double worst = 0.0;
    for (int n = -n_trunc + 1; n <= n_trunc - 1; ++n) {
        const double d = beta_exp + 2.0 * n;
        const double res = q * (c(n + 1) + c(n - 1)) - d * d * c(n);
        worst = std::max(worst, std::abs(res));
    }
    return worst / cmax;
}

FloquetMode floquet_coefficients(double q, double omega, int n_trunc) {
    if (n_trunc < 4) throw ValidationError("floquet_coefficients: n_trunc must be >= 4");
    if (!std::isfinite(omega) || omega <= 0.0) throw ValidationError("floquet_coefficients: omega must be > 0");

    FloquetMode mode;
    mode.q = q;
    mode.omega = omega;
    const auto ex = characteristic_exponent(q);
    mode.beta_exp = ex.beta;
    mode.region = ex.region;
    mode.omega0 = 0.5 * ex.beta * omega;

    if (q == 0.0) {
        mode.n_trunc = n_trunc;
        mode.coeffs.assign(static_cast<std::size_t>(2 * n_trunc + 1), 0.0);
        mode.coeffs[static_cast<std::size_t>(n_trunc)] = 1.0;
        return mode;
    }

    constexpr int max_trunc = 64;
    int N = std::min(n_trunc, max_trunc);
    std::vector<double> c;
    for (;;) {
        c = build_coefficients(q, ex.beta, N);
        double cmax = 0.0;
        for (double v : c) cmax = std::max(cmax, std::abs(v));
        const double edge = std::max(std::abs(c.front()), std::abs(c.back())) / cmax;
        if (edge <= 1e-17) break;
        if (N >= max_trunc) {
            if (edge <= 1e-3) break;
            throw NumericalError("floquet_coefficients: no convergence at n_trunc = 64", edge);
        }
        N = std::min(2 * N, max_trunc);
    }

    const double s = raw_sum_rule(c, ex.beta, N);
    if (!(s > 0.0)) throw NumericalError("floquet_coefficients: non-positive mode norm", s);
    const double scale = 1.0 / std::sqrt(s);
    for (double& v : c) v *= scale;
    mode.n_trunc = N;
    mode.coeffs = std::move(c);
    return mode;
}

ModeValue evaluate_mode(const FloquetMode& mode, double t) {
    ModeValue out{{0.0, 0.0}, {0.0, 0.0}};
    for (int n = -mode.n_trunc; n <= mode.n_trunc; ++n) {
        const double cn = mode.c(n);
        if (cn == 0.0) continue;
        const double nu = mode.omega0 + n * mode.omega;
        const std::complex<double> e = std::polar(1.0, nu * t);
        out.u += cn * e;
        out.u_dot += std::complex<double>(0.0, nu * cn) * e;
    }
    return out;
}

std::complex<double> wronskian(const FloquetMode& mode, double t) {
    const auto v = evaluate_mode(mode, t);
    return std::conj(v.u) * v.u_dot - v.u * std::conj(v.u_dot);
}

// ---------------------------------------------------------------------------
// Boundary scan

namespace {

std::vector<StableWindow> scan_windows(double q_lo, double q_hi, const DriveConfig& drive, const BoundaryScan& scan,
                                       bool parallel) {
    drive.validate();
    if (!std::isfinite(q_lo) || !std::isfinite(q_hi) || q_lo > q_hi)
        throw ValidationError("stability_boundaries: search interval must be finite and ordered");
    if (!(scan.resolution > 0.0) || !(scan.tolerance > 0.0))
        throw ValidationError("stability_boundaries: resolution and tolerance must be > 0");

    const long steps = static_cast<long>(std::ceil((q_hi - q_lo) / scan.resolution));
    std::vector<double> grid(static_cast<std::size_t>(steps + 1));
    for (long i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = std::min(q_lo + i * scan.resolution, q_hi);

    std::vector<char> stable(grid.size());
    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (long i = 0; i <= steps; ++i) {
        failure.capture([&] {
            const auto k = static_cast<std::size_t>(i);
            stable[k] = monodromy(grid[k], drive).stable ? 1 : 0;
        });
    }
    failure.rethrow();

    // Edges between grid cells, refined by bisection.
    std::vector<long> cuts;
    for (long i = 0; i < steps; ++i)
        if (stable[static_cast<std::size_t>(i)] != stable[static_cast<std::size_t>(i + 1)]) cuts.push_back(i);
    std::vector<double> edge(cuts.size());
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (long k = 0; k < static_cast<long>(cuts.size()); ++k) {
        failure.capture([&] {
            const auto i = static_cast<std::size_t>(cuts[static_cast<std::size_t>(k)]);
            double lo = grid[i], hi = grid[i + 1];
            const bool lo_stable = stable[i] != 0;
            while (hi - lo > scan.tolerance) {
                const double mid = 0.5 * (lo + hi);
                if (monodromy(mid, drive).stable == lo_stable)
                    lo = mid;
                else
                    hi = mid;
            }
            edge[static_cast<std::size_t>(k)] = 0.5 * (lo + hi);
        });
    }
    failure.rethrow();

    std::vector<StableWindow> out;
    bool inside = stable.front() != 0;
    double start = q_lo;
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        if (inside) {
            out.push_back({start, edge[k]});
        } else {
            start = edge[k];
        }
        inside = !inside;
    }
    if (inside) out.push_back({start, q_hi});
    return out;
}

}  // namespace

std::vector<StableWindow> stability_boundaries(double q_lo, double q_hi, const DriveConfig& drive,
                                               const BoundaryScan& scan) {
    return scan_windows(q_lo, q_hi, drive, scan, true);
}

std::vector<StableWindow> stability_boundaries_serial(double q_lo, double q_hi, const DriveConfig& drive,
                                                      const BoundaryScan& scan) {
    return scan_windows(q_lo, q_hi, drive, scan, false);
}

}  // namespace sawtrap
