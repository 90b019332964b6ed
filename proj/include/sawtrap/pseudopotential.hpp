#pragma once

#include "sawtrap/scales.hpp"

namespace sawtrap {

/// Time-independent Hamiltonian of the slow motion from the high-frequency expansion:
///   H = p²/2m [1 + κ cos²(kx)] + V0 sin²(kx)
/// with κ = kinetic_correction_coeff. At fourth order the quantum form carries
/// (1/2m)[p²g + 2pgp + gp²], g = g_coeff·cos²(kx), which reduces to κ = 4·g_coeff
/// classically.
struct EffectiveHamiltonian {
    int order = 2;
    double V0 = 0.0;                        ///< μeV
    double kinetic_correction_coeff = 0.0;  ///< κ
    double g_coeff = 0.0;
    double quantum_correction = 0.0;        ///< (q²/32)E_R [μeV], included in V0
    double eps = 0.0;
    double omega0 = 0.0;                    ///< rad/ns
};

/// Which fourth-order trap frequency to report. `displayed_epsilon` uses
/// ε² = (q²/8)(1+q̃); `alternative_sqrt` uses ε = (q/2√2)√(1+q̃²).
enum class FrequencyVariant { displayed_epsilon, alternative_sqrt };

/// Classical effective Hamiltonian: V0 = (q/8)V_SAW and κ = (3/8)q². The
/// kinetic correction is a fourth-order term, so `order` is reported as 4.
EffectiveHamiltonian classical_effective(double q, const DerivedScales& scales);

EffectiveHamiltonian quantum_effective(double q, const DerivedScales& scales, ExpansionOrder order,
                                       FrequencyVariant variant = FrequencyVariant::displayed_epsilon);

}  // namespace sawtrap
