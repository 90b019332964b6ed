#include "oracles.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <numbers>
#include <random>

namespace oracle {

namespace {

constexpr double pi = std::numbers::pi;

double hill_f(double q, const sawtrap::DriveConfig& d, double tau) {
    double f = d.dc_a;
    for (const auto& h : d.harmonics) f += 2.0 * q * h.weight * std::cos(2.0 * h.multiplier * tau);
    return f;
}

double period_tau(const sawtrap::DriveConfig& d) {
    int g = 0;
    for (const auto& h : d.harmonics) g = std::gcd(g, h.multiplier);
    return pi / g;
}

}  // namespace

Mat2 rk4_monodromy(double q, const sawtrap::DriveConfig& drive, int steps) {
    const double T = period_tau(drive);
    const double h = T / steps;
    Mat2 out{};
    for (int col = 0; col < 2; ++col) {
        double x = col == 0 ? 1.0 : 0.0, v = col == 0 ? 0.0 : 1.0;
        for (int i = 0; i < steps; ++i) {
            const double t = i * h;
            const double f0 = hill_f(q, drive, t), fm = hill_f(q, drive, t + h / 2), f1 = hill_f(q, drive, t + h);
            const double k1x = v, k1v = -f0 * x;
            const double k2x = v + h / 2 * k1v, k2v = -fm * (x + h / 2 * k1x);
            const double k3x = v + h / 2 * k2v, k3v = -fm * (x + h / 2 * k2x);
            const double k4x = v + h * k3v, k4v = -f1 * (x + h * k3x);
            x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
            v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        }
        out[0][col] = x;
        out[1][col] = v;
    }
    return out;
}

double beta_from_trace(double trace) { return std::acos(std::clamp(trace / 2.0, -1.0, 1.0)) / pi; }

double rk4_edge(double q_stable, double q_unstable, const sawtrap::DriveConfig& drive, double tol) {
    auto stable = [&](double q) {
        const auto M = rk4_monodromy(q, drive, 4000);
        return std::abs(M[0][0] + M[1][1]) <= 2.0;
    };
    double a = q_stable, b = q_unstable;
    while (std::abs(b - a) > tol) {
        const double m = 0.5 * (a + b);
        (stable(m) ? a : b) = m;
    }
    return 0.5 * (a + b);
}

ModeSamples rk4_mode(double q, double omega, int steps) {
    const double T = 2.0 * pi / omega;
    const double h = T / steps;
    auto acc = [&](double t, double x) { return -0.5 * omega * omega * q * std::cos(omega * t) * x; };
    // Two real fundamental solutions, stored at every step.
    std::vector<std::array<double, 4>> y(steps + 1);
    y[0] = {1.0, 0.0, 0.0, 1.0};  // (x1, v1, x2, v2)
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        std::array<double, 4> s = y[i], k[4];
        auto rhs = [&](double tt, const std::array<double, 4>& z) {
            return std::array<double, 4>{z[1], acc(tt, z[0]), z[3], acc(tt, z[2])};
        };
        k[0] = rhs(t, s);
        std::array<double, 4> z;
        for (int j = 0; j < 4; ++j) z[j] = s[j] + h / 2 * k[0][j];
        k[1] = rhs(t + h / 2, z);
        for (int j = 0; j < 4; ++j) z[j] = s[j] + h / 2 * k[1][j];
        k[2] = rhs(t + h / 2, z);
        for (int j = 0; j < 4; ++j) z[j] = s[j] + h * k[2][j];
        k[3] = rhs(t + h, z);
        for (int j = 0; j < 4; ++j) s[j] += h / 6 * (k[0][j] + 2 * k[1][j] + 2 * k[2][j] + k[3][j]);
        y[i + 1] = s;
    }
    // Monodromy [[x1 x2],[v1 v2]], eigenvalue e^{iπβ} with β ∈ (0, 1).
    const double m00 = y[steps][0], m01 = y[steps][2], m10 = y[steps][1], m11 = y[steps][3];
    const double beta = beta_from_trace(m00 + m11);
    const std::complex<double> lam = std::polar(1.0, pi * beta);
    // (M − λ)c = 0: c = (m01, λ − m00).
    std::complex<double> c1 = m01, c2 = lam - m00;
    ModeSamples out;
    out.omega = omega;
    out.omega0 = 0.5 * beta * omega;
    out.t.resize(steps + 1);
    out.u.resize(steps + 1);
    out.u_dot.resize(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        out.t[i] = i * h;
        out.u[i] = c1 * y[i][0] + c2 * y[i][2];
        out.u_dot[i] = c1 * y[i][1] + c2 * y[i][3];
    }
    const auto w = std::conj(out.u[0]) * out.u_dot[0] - out.u[0] * std::conj(out.u_dot[0]);
    const double scale = std::sqrt(2.0 * out.omega0 / w.imag());
    const auto phase = std::polar(1.0, -std::arg(out.u[0]));
    for (int i = 0; i <= steps; ++i) {
        out.u[i] *= scale * phase;
        out.u_dot[i] *= scale * phase;
    }
    return out;
}

std::vector<double> fourier_coefficients(const ModeSamples& m, int n_trunc) {
    const std::size_t steps = m.t.size() - 1;
    std::vector<double> c(2 * n_trunc + 1);
    for (int n = -n_trunc; n <= n_trunc; ++n) {
        std::complex<double> s = 0.0;
        for (std::size_t i = 0; i < steps; ++i)  // periodic trapezoid
            s += m.u[i] * std::polar(1.0, -(m.omega0 + n * m.omega) * m.t[i]);
        c[n + n_trunc] = (s / static_cast<double>(steps)).real();
    }
    return c;
}

double kinetic_energy(const ModeSamples& m, double hbar) {
    const std::size_t steps = m.t.size() - 1;
    double s = 0.0;
    for (std::size_t i = 0; i < steps; ++i) s += std::norm(m.u_dot[i]);
    return hbar / (4.0 * m.omega0) * s / static_cast<double>(steps);
}

std::pair<double, double> mc_trapped_fraction(std::size_t draws, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> v(0.0, 1.0);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < draws; ++i) hit += std::abs(v(rng)) <= 1.0;
    const double p = static_cast<double>(hit) / static_cast<double>(draws);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(draws))};
}

std::vector<std::array<double, 3>> rk4_pendulum(double q, const sawtrap::DriveConfig& drive, double x0, double v0,
                                                double tau_max, int steps) {
    const double h = tau_max / steps;
    std::vector<std::array<double, 3>> out{{0.0, x0, v0}};
    double x = x0, v = v0;
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const double f0 = hill_f(q, drive, t), fm = hill_f(q, drive, t + h / 2), f1 = hill_f(q, drive, t + h);
        const double k1x = v, k1v = -f0 * std::sin(x);
        const double k2x = v + h / 2 * k1v, k2v = -fm * std::sin(x + h / 2 * k1x);
        const double k3x = v + h / 2 * k2v, k3v = -fm * std::sin(x + h / 2 * k2x);
        const double k4x = v + h * k3v, k4v = -f1 * std::sin(x + h * k3x);
        x += h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x);
        v += h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v);
        out.push_back({(i + 1) * h, x, v});
    }
    return out;
}

}  // namespace oracle
