#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sawtrap {

/// A carrier species in a host heterostructure, at one chosen sound speed.
struct MaterialSystem {
    std::string name;
    double carrier_mass = 0.0;    ///< effective mass in units of m₀
    double sound_speed = 0.0;     ///< m/s (numerically nm/ns)
    double dielectric_rel = 1.0;  ///< ε_r
    std::string notes;

    void validate() const;
    /// Mass in internal units [μeV·ns²/nm²].
    double mass() const;

    /// Builds a system whose mass is chosen so that (m/2)v_s² equals `sound_energy_ueV`.
    static MaterialSystem from_sound_energy(std::string name, double sound_energy_ueV, double sound_speed,
                                            double dielectric_rel);
};

/// Catalog entry. Sound speeds are quoted as ranges; callers pick the value.
struct MaterialPreset {
    std::string name;
    double carrier_mass = 0.0;
    double sound_speed_min = 0.0;
    double sound_speed_max = 0.0;
    double dielectric_rel = 1.0;
    std::string notes;

    MaterialSystem at(double sound_speed) const;
    MaterialSystem at_min() const { return at(sound_speed_min); }
    MaterialSystem at_max() const { return at(sound_speed_max); }
};

struct Harmonic {
    int multiplier = 1;
    double weight = 1.0;

    friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// The SAW drive. f(τ) = a_dc + 2q Σᵢ wᵢ cos(2 mᵢ τ) with τ = ωt/2.
struct DriveConfig {
    double frequency_ghz = 1.0;  ///< f = ω/2π [GHz = 1/ns]
    double stability_q = 0.0;
    double dc_a = 0.0;
    std::vector<Harmonic> harmonics{{1, 1.0}};

    void validate() const;
    bool monochromatic() const;
    /// Angular drive frequency ω [rad/ns].
    double omega() const;

    static DriveConfig monochromatic_drive(double frequency_ghz, double q);
};

enum class ExpansionOrder { second = 2, fourth = 4 };

struct DerivedScales {
    double E_S = 0.0;          ///< sound energy (m/2)v_s² [μeV]
    double E_R = 0.0;          ///< recoil energy ħ²k²/2m [μeV]
    double V_SAW = 0.0;        ///< q·E_S [μeV]
    double V_IDT = 0.0;        ///< V_SAW/2 [μeV]
    double hbar_omega = 0.0;   ///< [μeV]
    double hbar_omega0 = 0.0;  ///< ε·ħω [μeV]
    double V0 = 0.0;           ///< ε²E_S [μeV]
    double eps = 0.0;
    double q_tilde = 0.0;      ///< E_R/(4E_S)
    double n_b = 0.0;          ///< V0/ħω₀
    double lattice_a = 0.0;    ///< λ/2 [nm]
    double wavelength = 0.0;   ///< v_s/f [nm]
    double wavenumber = 0.0;   ///< k = 2π/λ [1/nm]
    ExpansionOrder order = ExpansionOrder::second;
};

/// Upper edge of the first Mathieu stability region at a_dc = 0.
inline constexpr double first_region_edge = 0.908046;

double sound_energy(const MaterialSystem& material);

/// ε² for the chosen expansion order: q²/8, or (q²/8)(1 + q̃) at fourth order.
double epsilon_squared(double q, double q_tilde, ExpansionOrder order);

/// Trap scales of a monochromatic drive. With `strict_pseudo`, drive points
/// beyond the first stability region are rejected.
DerivedScales derived_scales(const MaterialSystem& material, const DriveConfig& drive,
                             ExpansionOrder order = ExpansionOrder::second, bool strict_pseudo = false);

// Material catalog (JSON lines: {name, mass_m0, v_s_m_per_s: [min, max], eps_r, notes}).

std::vector<MaterialPreset> parse_material_catalog(std::istream& in, const std::string& source);

/// $SAWTRAP_MATERIALS if set, else the catalog shipped in data/.
std::filesystem::path default_catalog_path();

std::vector<MaterialPreset> builtin_presets();

/// Built-in catalog followed by the entries of `user_path`. Entries with a
/// name already present replace the built-in one.
std::vector<MaterialPreset> load_material_presets(const std::filesystem::path& user_path);

const MaterialPreset& find_preset(const std::vector<MaterialPreset>& presets, const std::string& name);

}  // namespace sawtrap
