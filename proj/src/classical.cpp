#include "sawtrap/classical.hpp"

#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sawtrap/hill_floquet.hpp"

namespace sawtrap {

namespace {

using State2 = std::array<double, 2>;

struct PendulumSystem {
    double a_dc;
    double q;
    const std::vector<Harmonic>* harmonics;

    void operator()(const State2& x, State2& dx, double tau) const {
        double s = 0.0;
        for (const auto& h : *harmonics) s += h.weight * std::cos(2.0 * h.multiplier * tau);
        dx[0] = x[1];
        dx[1] = -(a_dc + 2.0 * q * s) * std::sin(x[0]);
    }
};

void check_inputs(double q, const DriveConfig& drive, double tau_max) {
    drive.validate();
    if (!std::isfinite(q)) throw ValidationError("classical: q must be finite");
    if (!std::isfinite(tau_max) || tau_max <= 0.0) throw ValidationError("classical: tau_max must be > 0");
}

}  // namespace

ClassicalTrajectory integrate_trajectory(double q, const ClassicalState& init, const DriveConfig& drive,
                                         double tau_max, double stride, const ode::Tolerance& tol) {
    check_inputs(q, drive, tau_max);
    if (!std::isfinite(init.x_tilde) || !std::isfinite(init.v_tilde) || !std::isfinite(init.tau))
        throw ValidationError("classical: initial state must be finite");

    PendulumSystem sys{drive.dc_a, q, &drive.harmonics};
    State2 x{init.x_tilde, init.v_tilde};
    ClassicalTrajectory out;
    out.stats = ode::integrate_sampled(sys, x, init.tau, init.tau + tau_max, stride, tol,
                                       [&](double tau, const State2& s) {
                                           out.samples.push_back({s[0], s[1], tau});
                                           return true;
                                       });
    return out;
}

StabilityVerdict classify_trajectory(double q, double x0, double v0, const DriveConfig& drive, double tau_max,
                                     const CriterionSpec& criterion) {
    check_inputs(q, drive, tau_max);
    const double limit = criterion.threshold();
    if (!(limit > 0.0)) throw ValidationError("classical: stability threshold must be > 0");

    StabilityVerdict v;
    v.criterion = criterion.kind;
    v.max_excursion = std::abs(x0);
    if (v.max_excursion >= limit) {
        v.stable = false;
        v.escape_tau = 0.0;
        return v;
    }
    PendulumSystem sys{drive.dc_a, q, &drive.harmonics};
    State2 x{x0, v0};
    auto watch = [&](double tau, const State2& s) {
        v.max_excursion = std::max(v.max_excursion, std::abs(s[0]));
        if (v.max_excursion >= limit) {
            v.stable = false;
            v.escape_tau = tau;
            return false;
        }
        return true;
    };
    ode::integrate_sampled(sys, x, 0.0, tau_max, tau_max, ode::Tolerance{1e-10, 1e-12}, watch, watch);
    return v;
}

StabilityVerdict classify_stability(double q, double theta, const DriveConfig& drive, double tau_max,
                                    const CriterionSpec& criterion) {
    if (!std::isfinite(theta) || theta < 0.0) throw ValidationError("classical: theta must be >= 0");
    return classify_trajectory(q, 0.0, std::sqrt(2.0 * theta), drive, tau_max, criterion);
}

double trapped_fraction(double theta) {
    if (!std::isfinite(theta) || theta < 0.0) throw ValidationError("trapped_fraction: theta must be >= 0");
    if (theta == 0.0) return 1.0;
    // Speeds in units of v₀ = √(k_BT/m): p(u) = √(2/π) e^{−u²/2}.
    auto p = [](double u) { return std::sqrt(2.0 / units::pi) * std::exp(-0.5 * u * u); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(p, 0.0, 1.0, 10, 1e-14);
}

double trapped_fraction_threshold() { return std::erf(1.0 / std::sqrt(2.0)); }

double secular_approximation(double q, double amplitude, double omega, double t, Diagnostics* diag) {
    if (std::abs(q) > 0.5)
        warn(diag, "secular_approximation: q = " + std::to_string(q) + " is outside q^2 << 1");
    if (q == 0.0) return 2.0 * amplitude;
    // c₀ and β are even in q; only the micromotion phase carries the sign.
    const auto mode = floquet_coefficients(std::abs(q), omega);
    return 2.0 * amplitude * mode.c(0) * std::cos(mode.omega0 * t) * (1.0 - 0.5 * q * std::cos(omega * t));
}

}  // namespace sawtrap
