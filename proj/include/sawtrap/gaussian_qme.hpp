#pragma once

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "sawtrap/errors.hpp"
#include "sawtrap/hill_floquet.hpp"
#include "sawtrap/ode.hpp"

namespace sawtrap {

// Born-Markov Floquet master equation of the Lamb-Dicke trap
//   H_S(t) = p²/2m + (m/2)W(t)x²,  W(t) = (ω²/2)·q_mode·cos ωt,
//   ρ̇ = −(i/ħ)[H_S, ρ] + γ(N+1)D[C_S(t)]ρ + γN D[C_S†(t)]ρ,
// closed on the moments (⟨x⟩, ⟨p⟩, ⟨x²⟩, ⟨p²⟩, ⟨xp+px⟩). The physical SAW sign is
// q_mode = −q (see physical_mode).

struct BathParams {
    double gamma = 0.0;        ///< rad/ns
    double temperature = 0.0;  ///< K
    std::optional<double> zeta;

    void validate() const;
    double kT() const;  ///< μeV

    static constexpr double default_zeta = 2.35e-2;
    /// γ = ζω₀ (ohmic fit).
    static BathParams ohmic(double omega0, double temperature, double zeta = default_zeta);
    static BathParams from_kT(double gamma, double kT_ueV);
};

/// Bose occupation at signed angular frequency ν [rad/ns]. Negative ν gives
/// −(1 + n̄(|ν|)); at T = 0 this is −1 for ν < 0 and 0 for ν > 0.
double thermal_occupation(double nu, double kT);

/// Floquet mode of the physical Lamb-Dicke equation ẍ = (ω²/2)q cos(ωt) x.
FloquetMode physical_mode(double q, double omega, int n_trunc = 8);

struct ShiftCoefficients {
    std::complex<double> alpha_x;
    std::complex<double> beta_p;
    double t = 0.0;

    /// iħ(αβ* − α*β); 1 for a properly normalized mode.
    double commutator_norm() const;
};

/// C_S(t) = α x + β p with α = −i√(m/2ħω₀)·u̇(t), β = i·u(t)/√(2mħω₀).
ShiftCoefficients shift_coefficients(const FloquetMode& mode, double m, double t);

struct MomentState {
    double mean_x = 0.0;   ///< nm
    double mean_p = 0.0;   ///< μeV·ns/nm
    double var_x = 0.0;
    double var_p = 0.0;
    double cov_sym = 0.0;  ///< ⟨xp+px⟩/2 − ⟨x⟩⟨p⟩

    using Raw = std::array<double, 5>;
    Raw raw() const;
    static MomentState from_raw(const Raw& v);

    /// var_x·var_p − cov_sym² − (ħ/2)².
    double uncertainty_excess() const;
    void validate() const;

    /// Displaced thermal state of the oscillator (m, ω₀) with occupation n̄.
    static MomentState displaced_thermal(double mean_x, double mean_p, double nbar, double m, double omega0);
    /// Coherent state given in oscillator units x/ℓ, pℓ/ħ with ℓ = √(ħ/mω₀).
    static MomentState coherent_scaled(double x_s, double p_s, double m, double omega0);
};

struct EffectiveOccupation {
    double N = 0.0;
    std::vector<std::pair<int, double>> terms;  ///< n → c₂ₙ²(ω₀+nω)/ω₀·n̄(ω₀+nω)
};

EffectiveOccupation effective_occupation(const FloquetMode& mode, const BathParams& bath);

using Matrix5 = std::array<std::array<double, 5>, 5>;
using Vector5 = std::array<double, 5>;

/// v̇ = M(t)v + C(t) for the raw moment vector. Either driven by a Floquet
/// mode or the static reference oscillator W ≡ ω₀².
class MomentODE {
public:
    static MomentODE floquet(const FloquetMode& mode, double m, const BathParams& bath);
    static MomentODE reference(double omega0, double m, const BathParams& bath);

    double W(double t) const;
    ModeValue mode_value(double t) const;
    ShiftCoefficients shift(double t) const;
    void evaluate(double t, Matrix5& M, Vector5& C) const;

    double mass() const { return m_; }
    double omega0() const { return omega0_; }
    double gamma() const { return gamma_; }
    double occupation() const { return N_; }
    /// ℓ = √(ħ/mω₀) [nm]
    double length() const { return ell_; }
    bool is_reference() const { return !mode_.has_value(); }
    const std::optional<FloquetMode>& mode() const { return mode_; }

    /// Right-hand side in oscillator units (x/ℓ, pℓ/ħ, x²/ℓ², p²ℓ²/ħ², S/ħ).
    void scaled_rhs(const Vector5& y, Vector5& dy, double t) const;
    Vector5 to_scaled(const MomentState::Raw& v) const;
    MomentState::Raw from_scaled(const Vector5& y) const;

private:
    std::optional<FloquetMode> mode_;
    double m_ = 0.0;
    double omega0_ = 0.0;
    double gamma_ = 0.0;
    double N_ = 0.0;
    double ell_ = 0.0;
    std::array<double, 5> scale_{};
};

MomentODE assemble_moment_ode(const FloquetMode& mode, double m, const BathParams& bath);

struct MomentSample {
    double t = 0.0;
    MomentState state;
};

struct MomentTrajectory {
    std::vector<MomentSample> samples;
    ode::Stats stats;
};

/// Raises NumericalError when the uncertainty relation breaks by more than
/// 1e-8 relative at any sample.
MomentTrajectory propagate_moments(const MomentState& state0, const MomentODE& ode, double t_end, double stride,
                                   const ode::Tolerance& tol = {1e-10, 1e-12});

MomentTrajectory reference_oscillator(const MomentState& state0, double omega0, double m, const BathParams& bath,
                                      double t_end, double stride, const ode::Tolerance& tol = {1e-10, 1e-12});

struct KineticEnergy {
    double zero_point = 0.0;  ///< ħω₀/4 [μeV]
    double delta_heat = 0.0;
    double total = 0.0;
};

/// Period-averaged kinetic energy of the cooled quasi-stationary state.
KineticEnergy averaged_kinetic_energy(const FloquetMode& mode);

struct QuasiStationarity {
    bool quasi_stationary = false;
    bool constant = false;     ///< periodic with no ripple (static case)
    double period_tau = 0.0;   ///< π when quasi-stationary
    double deviation = 0.0;    ///< worst consecutive-period deviation
};

/// Compares the last two drive periods of the trajectory. Samples must be
/// uniformly spaced with a stride dividing the period 2π/ω.
QuasiStationarity detect_quasistationary(const MomentTrajectory& traj, double omega, double threshold = 1e-3);

/// Flags k|⟨x⟩| or kσ_x above `limit`. Returns true when the state is inside the regime.
bool lamb_dicke_ok(const MomentState& s, double wavenumber, Diagnostics* diag = nullptr, double limit = 0.3);

/// Warns when ħγ/k_BT or k_BT/ħω₀ exceed `limit`. Returns true when both pass.
bool markov_regime_ok(const BathParams& bath, double omega0, Diagnostics* diag = nullptr, double limit = 0.3);

// Truncated-Fock oracle -----------------------------------------------------

struct FockOptions {
    int n_max = 40;
    bool check_convergence = true;  ///< rerun with 2·n_max and compare
    double convergence_tol = 1e-6;
    /// Keep doubling while the check fails, as long as the next run stays
    /// within this basis size. Below 4·n_max only the single pair is tried.
    int n_max_limit = 160;
    double tail_tol = 1e-8;
    ode::Tolerance tol{1e-8, 1e-10};
};

struct FockSample {
    double t = 0.0;
    MomentState state;
    double purity = 0.0;
};

struct FockTrajectory {
    std::vector<FockSample> samples;
    int n_max = 0;             ///< basis actually returned
    int n_max_start = 0;
    double convergence = 0.0;  ///< worst relative change over the last doubling
    std::vector<std::pair<int, double>> doublings;  ///< (n, change from n to 2n)
    double edge_population = 0.0;  ///< largest ρ_nn summed over the top two levels
    ode::Stats stats;
};

/// Density matrix of the full time-dependent problem in the number basis of
/// the reference oscillator at ω₀. `state0` must be a displaced thermal state.
/// With check_convergence the basis is doubled until two successive runs agree
/// to convergence_tol; the larger run is returned.
FockTrajectory fock_oracle(const FloquetMode& mode, double m, const BathParams& bath, const MomentState& state0,
                           double t_end, double stride, const FockOptions& options = {});

/// Largest |a − b| over samples, per component, divided by that component's
/// largest |value| along `b`.
double relative_moment_error(const MomentTrajectory& a, const FockTrajectory& b);

}  // namespace sawtrap
