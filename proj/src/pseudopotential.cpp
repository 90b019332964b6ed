#include "sawtrap/pseudopotential.hpp"

#include <cmath>

#include "sawtrap/errors.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap {

namespace {

void check(double q, const DerivedScales& s) {
    if (!std::isfinite(q) || q < 0.0) throw ValidationError("pseudopotential: q must be >= 0");
    if (!(s.E_S >= 0.0) || !(s.hbar_omega > 0.0) || !(s.E_R >= 0.0))
        throw ValidationError("pseudopotential: scales must be populated");
}

}  // namespace

EffectiveHamiltonian classical_effective(double q, const DerivedScales& scales) {
    check(q, scales);
    EffectiveHamiltonian h;
    h.order = 4;
    h.V0 = q * q / 8.0 * scales.E_S;
    h.kinetic_correction_coeff = 3.0 / 8.0 * q * q;
    h.eps = q / std::sqrt(8.0);
    h.omega0 = h.eps * scales.hbar_omega / units::hbar;
    return h;
}

EffectiveHamiltonian quantum_effective(double q, const DerivedScales& scales, ExpansionOrder order,
                                       FrequencyVariant variant) {
    check(q, scales);
    EffectiveHamiltonian h;
    h.order = static_cast<int>(order);
    const double omega = scales.hbar_omega / units::hbar;
    const double eps2 = epsilon_squared(q, scales.q_tilde, order);
    h.V0 = eps2 * scales.E_S;
    h.eps = std::sqrt(eps2);
    if (order == ExpansionOrder::fourth) {
        h.g_coeff = 3.0 / 32.0 * q * q;
        h.kinetic_correction_coeff = 4.0 * h.g_coeff;
        h.quantum_correction = q * q / 32.0 * scales.E_R;
        if (variant == FrequencyVariant::alternative_sqrt)
            h.eps = q / (2.0 * std::sqrt(2.0)) * std::sqrt(1.0 + scales.q_tilde * scales.q_tilde);
    }
    h.omega0 = h.eps * omega;
    return h;
}

}  // namespace sawtrap
