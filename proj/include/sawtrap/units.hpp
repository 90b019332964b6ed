#pragma once

// Internal unit system: energies in μeV, lengths in nm, times in ns.
// Velocities in m/s coincide numerically with nm/ns, angular frequencies
// are rad/ns and masses are carried as μeV·ns²/nm².

#include <numbers>

namespace sawtrap::units {

inline constexpr double pi = std::numbers::pi;

/// Reduced Planck constant [μeV·ns].
inline constexpr double hbar = 0.6582119569;
/// Planck constant [μeV·ns].
inline constexpr double planck = 2.0 * pi * hbar;
/// Boltzmann constant [μeV/K].
inline constexpr double k_boltzmann = 86.17333262;
/// Speed of light [nm/ns].
inline constexpr double c_light = 299792458.0;
/// Free-electron rest energy [μeV].
inline constexpr double m0_c2 = 5.1099895000e11;
/// Free-electron mass [μeV·ns²/nm²].
inline constexpr double m0 = m0_c2 / (c_light * c_light);
/// e²/(4πε₀) [μeV·nm].
inline constexpr double coulomb = 1.439964548e6;
/// 1 μeV in joule.
inline constexpr double ueV_to_joule = 1.602176634e-25;

inline constexpr double mass_from_m0(double m_rel) { return m_rel * m0; }

inline constexpr double kelvin_to_ueV(double temperature_k) { return k_boltzmann * temperature_k; }

}  // namespace sawtrap::units
