#pragma once

// Adaptive integration with fixed-stride sampling, shared by every
// propagator in the library. Steps are taken with a controlled Boost.Odeint
// stepper (Runge-Kutta-Fehlberg 7(8) unless another is named); this wrapper
// owns the sampling grid, early termination and step-size-underflow detection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "sawtrap/errors.hpp"

namespace sawtrap::ode {

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-12;
};

struct Stats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    double t_final = 0.0;
    bool stopped_early = false;
};

struct NoStepHook {
    template <class State>
    bool operator()(double, const State&) const { return true; }
};

/// Integrates dx/dt = f(x, t) from t0 to t_end. `on_sample(t, x)` fires at
/// t0 + k·stride (k = 0, 1, ...) and at t_end; `on_step(t, x)` fires after
/// every accepted step. Either callback may return false to stop.
template <template <class...> class Method = boost::numeric::odeint::runge_kutta_fehlberg78, class State,
          class System, class OnSample, class OnStep = NoStepHook>
Stats integrate_sampled(System&& system, State& x, double t0, double t_end, double stride,
                        const Tolerance& tol, OnSample&& on_sample, OnStep&& on_step = OnStep{},
                        std::size_t max_steps = 50'000'000) {
    namespace odeint = boost::numeric::odeint;
    if (!(stride > 0.0)) throw ValidationError("integration stride must be positive");
    if (!(t_end >= t0)) throw ValidationError("integration interval is reversed");

    auto stepper = odeint::make_controlled(tol.abs, tol.rel, Method<State>());

    Stats stats;
    double t = t0;
    stats.t_final = t0;
    if (!on_sample(t, static_cast<const State&>(x))) {
        stats.stopped_early = true;
        return stats;
    }

    std::size_t k = 1;
    double dt_free = std::min(stride, std::max(t_end - t0, 0.0)) * 0.1;
    if (dt_free <= 0.0) return stats;

    while (t < t_end) {
        double target = std::min(t0 + static_cast<double>(k) * stride, t_end);
        while (t < target) {
            const double remaining = target - t;
            double dt = std::min(dt_free, remaining);
            const bool truncated = dt == remaining;
            const double t_before = t;
            auto res = stepper.try_step(system, x, t, dt);
            if (res == odeint::success) {
                ++stats.accepted;
                if (!truncated || dt > dt_free) dt_free = dt;
                if (truncated) t = target;
                if (!on_step(t, static_cast<const State&>(x))) {
                    stats.t_final = t;
                    stats.stopped_early = true;
                    return stats;
                }
            } else {
                ++stats.rejected;
                dt_free = dt;
                const double floor = 1e-14 * std::max(1.0, std::abs(t_before));
                if (dt_free < floor) {
                    throw NumericalError("ODE step-size underflow at t = " + std::to_string(t_before), dt_free);
                }
            }
            if (stats.accepted + stats.rejected > max_steps) {
                throw NumericalError("ODE step budget exhausted at t = " + std::to_string(t), tol.rel);
            }
        }
        stats.t_final = t;
        if (!on_sample(t, static_cast<const State&>(x))) {
            stats.stopped_early = true;
            return stats;
        }
        ++k;
    }
    return stats;
}

}  // namespace sawtrap::ode
