#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sawtrap/errors.hpp"
#include "sawtrap/ode.hpp"
#include "sawtrap/scales.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap {

// Nonlinear classical motion in the travelling SAW frame, dimensionless:
//   x̃″ + [a_dc + 2q Σᵢ wᵢ cos(2mᵢτ)] sin x̃ = 0,  x̃ = kx, τ = ωt/2.

struct ClassicalState {
    double x_tilde = 0.0;
    double v_tilde = 0.0;  ///< dx̃/dτ
    double tau = 0.0;
};

struct ClassicalTrajectory {
    std::vector<ClassicalState> samples;
    ode::Stats stats;
};

inline constexpr double default_tau_max = 1000.0 * units::pi;

/// Samples at init.tau + k·stride up to init.tau + tau_max. Step-size
/// underflow raises NumericalError.
ClassicalTrajectory integrate_trajectory(double q, const ClassicalState& init, const DriveConfig& drive,
                                         double tau_max, double stride,
                                         const ode::Tolerance& tol = {1e-10, 1e-12});

enum class StabilityCriterion { half_lattice, mean_free_path };

struct CriterionSpec {
    StabilityCriterion kind = StabilityCriterion::half_lattice;
    double limit = units::pi;  ///< mean_free_path only: k·l_mfp

    double threshold() const { return kind == StabilityCriterion::half_lattice ? units::pi : limit; }
    static CriterionSpec mean_free_path(double k_lmfp) { return {StabilityCriterion::mean_free_path, k_lmfp}; }
};

struct StabilityVerdict {
    bool stable = true;
    double max_excursion = 0.0;
    std::optional<double> escape_tau;
    StabilityCriterion criterion = StabilityCriterion::half_lattice;
};

/// Stable iff max|x̃| stays strictly below the threshold over [0, tau_max].
StabilityVerdict classify_trajectory(double q, double x0, double v0, const DriveConfig& drive, double tau_max,
                                     const CriterionSpec& criterion = {});

/// Thermal launch: x̃₀ = 0, ṽ₀ = √(2θ) with θ = k_BT/E_S.
StabilityVerdict classify_stability(double q, double theta, const DriveConfig& drive,
                                    double tau_max = default_tau_max, const CriterionSpec& criterion = {});

/// ∫₀^{v₀} p(v) dv for the one-dimensional Maxwell-Boltzmann speed density with
/// v₀ = √(k_BT/m), by adaptive quadrature. θ = 0 gives 1.
double trapped_fraction(double theta);

/// Fraction threshold equivalent to a deterministic stable launch at √(2θ): erf(1/√2).
double trapped_fraction_threshold();

/// Lowest-order Lamb-Dicke trajectory X·cos(ω₀t)[1 − (q/2)cos ωt], X = 2AC₀,
/// with C₀ and ω₀ from the Floquet mode. `q` carries the sign of
/// physical_mode: the frame equation above corresponds to −q. Warns above |q| = 0.5.
double secular_approximation(double q, double amplitude, double omega, double t, Diagnostics* diag = nullptr);

// Stability diagram ------------------------------------------------------

struct DiagramOptions {
    double tau_max = default_tau_max;
    int samples_per_cell = 1;
    std::uint64_t seed = 20240601;
    CriterionSpec criterion{};
    /// Initial displacement for θ = 0 cells, so the linear stability is probed.
    /// Kept small: micromotion in the exotic window amplifies it about 800-fold.
    double probe_displacement = 1e-5;
};

struct DiagramCell {
    double fraction_stable = 0.0;
    double max_excursion_median = 0.0;
    bool stable = false;  ///< fraction ≥ trapped_fraction_threshold()
};

struct StabilityDiagram {
    std::vector<double> q_grid;
    std::vector<double> temp_grid;  ///< θ = k_BT/E_S
    std::vector<DiagramCell> cells;  ///< row-major: cells[i_theta * q_grid.size() + i_q]
    DiagramOptions options;

    const DiagramCell& at(std::size_t i_q, std::size_t i_theta) const { return cells[i_theta * q_grid.size() + i_q]; }
};

/// OpenMP over cells; each cell owns its RNG stream, so the result depends
/// only on (grids, drive, options).
StabilityDiagram stability_diagram(const std::vector<double>& q_grid, const std::vector<double>& temp_grid,
                                   const DriveConfig& drive, const DiagramOptions& options = {});

/// Serial reference of stability_diagram.
StabilityDiagram stability_diagram_serial(const std::vector<double>& q_grid, const std::vector<double>& temp_grid,
                                          const DriveConfig& drive, const DiagramOptions& options = {});

/// Highest θ of a stable cell with q in [q_min, q_max]; 0 if none.
double lobe_max_theta(const StabilityDiagram& diagram, double q_min, double q_max);

/// Seed of the RNG stream owned by one diagram cell.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index);

}  // namespace sawtrap
