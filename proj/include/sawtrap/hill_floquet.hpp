#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include "sawtrap/ode.hpp"
#include "sawtrap/scales.hpp"

namespace sawtrap {

// Hill equation in the drive phase τ = ωt/2:
//   x″ + [a_dc + 2q Σᵢ wᵢ cos(2mᵢτ)] x = 0.
// The Lamb-Dicke expansion of the SAW potential gives this with q → −q;
// β, stability and |c₂ₙ| do not care, the mode coefficients do.

struct MonodromyResult {
    std::array<std::array<double, 2>, 2> matrix{};
    double trace = 0.0;
    bool stable = false;
    double q = 0.0;
    DriveConfig drive;

    double determinant() const { return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]; }
};

/// |trace| ≤ 2 + this counts as stable (absorbs round-off at marginal points).
inline constexpr double trace_slack = 1e-10;

/// Drive period in τ: π / gcd(multipliers).
double drive_period_tau(const DriveConfig& drive);

/// Fundamental matrix over one period; `q` overrides drive.stability_q.
MonodromyResult monodromy(double q, const DriveConfig& drive, const ode::Tolerance& tol = {1e-12, 1e-14});

struct CharacteristicExponent {
    double beta = 0.0;  ///< in [0, 2)
    int region = 0;     ///< 0 for the first stable window along a_dc = 0, 1 for the next, ...
};

/// β of the monochromatic Mathieu equation at a_dc = 0. Throws ValidationError
/// ("unstable drive point") outside the stable windows.
CharacteristicExponent characteristic_exponent(double q);

/// Continued-fraction function F(β) = β² − q(r₁⁺ + r₁⁻); its zeros are the exponents.
double continued_fraction_residual(double q, double beta, int depth = 0);

struct FloquetMode {
    double q = 0.0;  ///< signed; q < 0 is the physical SAW sign
    double beta_exp = 0.0;
    int region = 0;
    int n_trunc = 0;
    std::vector<double> coeffs;  ///< c₂ₙ for n = −n_trunc..n_trunc
    double omega = 0.0;          ///< rad/ns
    double omega0 = 0.0;         ///< (β/2)ω

    double c(int n) const {
        return (n < -n_trunc || n > n_trunc) ? 0.0 : coeffs[static_cast<std::size_t>(n + n_trunc)];
    }
    /// Σ c₂ₙ²(ω₀+nω)/ω₀; 1 after normalization (undefined for ω₀ = 0).
    double sum_rule() const;
    /// max over interior n of |q(c₂ₙ₊₂ + c₂ₙ₋₂) − (β+2n)²c₂ₙ| / max|c|.
    double recursion_residual() const;
};

/// Minimal solution of q(c₂ₙ₊₂ + c₂ₙ₋₂) = (β+2n)²c₂ₙ, sum-rule normalized.
/// `n_trunc` grows (up to 64) until the edge coefficients are negligible.
FloquetMode floquet_coefficients(double q, double omega, int n_trunc = 8);

struct ModeValue {
    std::complex<double> u;
    std::complex<double> u_dot;  ///< d/dt [1/ns]
};

/// u(t) = Σ c₂ₙ e^{i(ω₀+nω)t}. With the sum-rule normalization u(0) is real,
/// u̇(0) is imaginary and u(0)·Im u̇(0) = ω₀; u(0) → 1 only as q → 0.
ModeValue evaluate_mode(const FloquetMode& mode, double t);

/// u*u̇ − u u̇* (purely imaginary; equals 2iω₀ for a normalized mode).
std::complex<double> wronskian(const FloquetMode& mode, double t);

struct StableWindow {
    double q_lo = 0.0;
    double q_hi = 0.0;
};

struct BoundaryScan {
    double resolution = 0.01;  ///< grid step in q
    double tolerance = 1e-6;   ///< bisection target
};

/// Stable windows of `drive` inside [q_lo, q_hi]. Parallel over grid points.
std::vector<StableWindow> stability_boundaries(double q_lo, double q_hi, const DriveConfig& drive,
                                               const BoundaryScan& scan = {});

/// Serial reference of stability_boundaries; same result bit for bit.
std::vector<StableWindow> stability_boundaries_serial(double q_lo, double q_hi, const DriveConfig& drive,
                                                      const BoundaryScan& scan = {});

}  // namespace sawtrap
