#include "sawtrap/scales.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "sawtrap/errors.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap {

namespace {

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void MaterialSystem::validate() const {
    if (!finite(carrier_mass) || carrier_mass < 0.0)
        throw ValidationError("material '" + name + "': carrier_mass must be >= 0");
    if (!finite(sound_speed) || sound_speed <= 0.0)
        throw ValidationError("material '" + name + "': sound_speed must be > 0");
    if (!finite(dielectric_rel) || dielectric_rel < 1.0)
        throw ValidationError("material '" + name + "': dielectric_rel must be >= 1");
}

double MaterialSystem::mass() const { return units::mass_from_m0(carrier_mass); }

MaterialSystem MaterialSystem::from_sound_energy(std::string name, double sound_energy_ueV, double sound_speed,
                                                 double dielectric_rel) {
    MaterialSystem m;
    m.name = std::move(name);
    m.sound_speed = sound_speed;
    m.dielectric_rel = dielectric_rel;
    m.carrier_mass = 2.0 * sound_energy_ueV / (sound_speed * sound_speed) / units::m0;
    m.validate();
    return m;
}

MaterialSystem MaterialPreset::at(double sound_speed) const {
    MaterialSystem m{name, carrier_mass, sound_speed, dielectric_rel, notes};
    m.validate();
    return m;
}

void DriveConfig::validate() const {
    if (!finite(frequency_ghz) || frequency_ghz <= 0.0) throw ValidationError("drive: frequency must be > 0");
    if (!finite(stability_q) || stability_q < 0.0) throw ValidationError("drive: stability_q must be >= 0");
    if (!finite(dc_a)) throw ValidationError("drive: dc_a must be finite");
    if (harmonics.empty()) throw ValidationError("drive: at least one harmonic is required");
    for (const auto& h : harmonics) {
        if (h.multiplier < 1) throw ValidationError("drive: harmonic multipliers must be positive integers");
        if (!finite(h.weight)) throw ValidationError("drive: harmonic weights must be finite");
    }
}

bool DriveConfig::monochromatic() const {
    return harmonics.size() == 1 && harmonics.front().multiplier == 1 && harmonics.front().weight == 1.0;
}

double DriveConfig::omega() const { return 2.0 * units::pi * frequency_ghz; }

DriveConfig DriveConfig::monochromatic_drive(double frequency_ghz, double q) {
    DriveConfig d;
    d.frequency_ghz = frequency_ghz;
    d.stability_q = q;
    return d;
}

double sound_energy(const MaterialSystem& material) {
    material.validate();
    return 0.5 * material.mass() * material.sound_speed * material.sound_speed;
}

double epsilon_squared(double q, double q_tilde, ExpansionOrder order) {
    const double base = q * q / 8.0;
    return order == ExpansionOrder::fourth ? base * (1.0 + q_tilde) : base;
}

DerivedScales derived_scales(const MaterialSystem& material, const DriveConfig& drive, ExpansionOrder order,
                             bool strict_pseudo) {
    material.validate();
    drive.validate();
    if (!drive.monochromatic())
        throw ValidationError("derived_scales: pseudopotential quantities need a monochromatic drive");
    const double q = drive.stability_q;
    if (strict_pseudo && q > first_region_edge)
        throw ValidationError("derived_scales: q = " + std::to_string(q) +
                              " lies beyond the first stability region; the pseudopotential is undefined");

    DerivedScales s;
    s.order = order;
    s.E_S = sound_energy(material);
    s.wavelength = material.sound_speed / drive.frequency_ghz;
    s.lattice_a = 0.5 * s.wavelength;
    s.wavenumber = 2.0 * units::pi / s.wavelength;
    s.hbar_omega = units::hbar * drive.omega();
    s.V_SAW = q * s.E_S;
    s.V_IDT = 0.5 * s.V_SAW;
    if (material.carrier_mass > 0.0) {
        s.E_R = units::hbar * units::hbar * s.wavenumber * s.wavenumber / (2.0 * material.mass());
        s.q_tilde = s.E_R / (4.0 * s.E_S);
    }
    const double eps2 = epsilon_squared(q, s.q_tilde, order);
    s.eps = std::sqrt(eps2);
    s.hbar_omega0 = s.eps * s.hbar_omega;
    s.V0 = eps2 * s.E_S;
    s.n_b = s.hbar_omega0 > 0.0 ? s.V0 / s.hbar_omega0 : 0.0;
    return s;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

using nlohmann::json;

[[noreturn]] void catalog_error(const std::string& source, int line, const std::string& field,
                                const std::string& msg) {
    std::ostringstream os;
    os << source << ":" << line;
    if (!field.empty()) os << ": field '" << field << "'";
    os << ": " << msg;
    throw ValidationError(os.str());
}

double number_field(const json& obj, const char* key, const std::string& source, int line) {
    auto it = obj.find(key);
    if (it == obj.end()) catalog_error(source, line, key, "missing");
    if (!it->is_number()) catalog_error(source, line, key, "expected a number");
    return it->get<double>();
}

}  // namespace

std::vector<MaterialPreset> parse_material_catalog(std::istream& in, const std::string& source) {
    std::vector<MaterialPreset> out;
    std::string text;
    int line = 0;
    while (std::getline(in, text)) {
        ++line;
        const auto first = text.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(text);
        } catch (const json::parse_error& e) {
            catalog_error(source, line, "", std::string("malformed JSON: ") + e.what());
        }
        if (!obj.is_object()) catalog_error(source, line, "", "expected a JSON object");
        if (obj.contains("catalog_version")) continue;

        MaterialPreset p;
        auto name = obj.find("name");
        if (name == obj.end()) catalog_error(source, line, "name", "missing");
        if (!name->is_string()) catalog_error(source, line, "name", "expected a string");
        p.name = name->get<std::string>();
        p.carrier_mass = number_field(obj, "mass_m0", source, line);
        p.dielectric_rel = number_field(obj, "eps_r", source, line);

        auto vs = obj.find("v_s_m_per_s");
        if (vs == obj.end()) catalog_error(source, line, "v_s_m_per_s", "missing");
        if (!vs->is_array() || vs->size() != 2 || !(*vs)[0].is_number() || !(*vs)[1].is_number())
            catalog_error(source, line, "v_s_m_per_s", "expected [min, max]");
        p.sound_speed_min = (*vs)[0].get<double>();
        p.sound_speed_max = (*vs)[1].get<double>();
        if (p.sound_speed_min > p.sound_speed_max) catalog_error(source, line, "v_s_m_per_s", "min exceeds max");

        if (auto notes = obj.find("notes"); notes != obj.end()) {
            if (!notes->is_string()) catalog_error(source, line, "notes", "expected a string");
            p.notes = notes->get<std::string>();
        }
        if (p.carrier_mass < 0.0) catalog_error(source, line, "mass_m0", "must be >= 0");
        if (p.sound_speed_min <= 0.0) catalog_error(source, line, "v_s_m_per_s", "speeds must be > 0");
        if (p.dielectric_rel < 1.0) catalog_error(source, line, "eps_r", "must be >= 1");
        out.push_back(std::move(p));
    }
    return out;
}

std::filesystem::path default_catalog_path() {
    if (const char* env = std::getenv("SAWTRAP_MATERIALS"); env != nullptr && *env != '\0') return env;
    return std::filesystem::path(SAWTRAP_DATA_DIR) / "materials.jsonl";
}

std::vector<MaterialPreset> builtin_presets() {
    const auto path = std::filesystem::path(SAWTRAP_DATA_DIR) / "materials.jsonl";
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open built-in material catalog " + path.string());
    return parse_material_catalog(in, path.string());
}

std::vector<MaterialPreset> load_material_presets(const std::filesystem::path& user_path) {
    auto presets = builtin_presets();
    std::ifstream in(user_path);
    if (!in) throw ValidationError("cannot open material catalog " + user_path.string());
    for (auto& p : parse_material_catalog(in, user_path.string())) {
        auto it = std::find_if(presets.begin(), presets.end(), [&](const auto& e) { return e.name == p.name; });
        if (it != presets.end())
            *it = std::move(p);
        else
            presets.push_back(std::move(p));
    }
    return presets;
}

const MaterialPreset& find_preset(const std::vector<MaterialPreset>& presets, const std::string& name) {
    for (const auto& p : presets)
        if (p.name == name) return p;
    throw ValidationError("unknown material preset '" + name + "'");
}

}  // namespace sawtrap
