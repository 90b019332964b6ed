#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sawtrap/classical.hpp"
#include "sawtrap/hubbard.hpp"
#include "sawtrap/scales.hpp"

namespace sawtrap::app {

using json = nlohmann::json;

enum class Command { scales, stability, trajectory, qme, hubbard, feasibility, case_study, plot };

std::string to_string(Command c);
Command parse_command(const std::string& name);

/// Either an explicit list or an inclusive linspace.
struct GridSpec {
    std::vector<double> values;
    std::optional<double> start, stop;
    std::optional<int> count;

    std::vector<double> resolve(const std::string& path) const;
    static GridSpec linspace(double a, double b, int n) { return {{}, a, b, n}; }
};

struct MaterialInput {
    std::string preset = "holes in GaN";
    std::optional<double> sound_speed;   ///< m/s; preset maximum when absent
    std::optional<double> mass_m0;
    std::optional<double> eps_r;
    std::optional<double> sound_energy;  ///< μeV; fixes the mass
};

struct BathInput {
    double gamma_over_omega0 = 1e-3;
    std::optional<double> zeta;                 ///< overrides gamma_over_omega0
    double kT_over_hbar_omega0 = 0.1;
    std::optional<double> temperature_K;        ///< overrides kT_over_hbar_omega0
};

struct StabilityInput {
    GridSpec q = GridSpec::linspace(0.02, 1.0, 50);
    GridSpec theta = GridSpec::linspace(0.0, 0.05, 26);
    double tau_max = default_tau_max;
    int samples_per_cell = 32;
    std::string criterion = "half_lattice";
    std::optional<double> mfp_limit;
    double probe_displacement = 1e-5;
    bool parallel = true;
};

struct TrajectoryInput {
    double x0 = 0.0;
    double v0 = 0.05;
    double tau_max = 200.0;
    double stride = 0.05;
};

struct QmeInput {
    double x_scaled = 0.0;   ///< ⟨x⟩/ℓ
    double p_scaled = 0.01;  ///< ⟨p⟩ℓ/ħ
    double nbar = 0.0;
    double secular_periods = 10.0;
    int samples_per_period = 8;  ///< per drive period
    bool fock = false;
    int fock_n_max = 40;
};

struct HubbardInput {
    std::optional<double> d_screen;  ///< nm; unscreened when absent
};

struct PlotInput {
    std::string dataset;
    std::string kind = "heatmap";
    std::string overlay;  ///< optional second dataset drawn dashed
    std::string output;
};

struct OutputInput {
    std::string dir = "out";
    std::string prefix;  ///< command name when empty
};

struct RunConfig {
    Command command = Command::scales;
    std::string catalog;  ///< extra presets on top of the default catalog
    MaterialInput material;
    DriveConfig drive = DriveConfig::monochromatic_drive(50.0, 0.5);
    int order = 2;
    std::uint64_t seed = 20240601;
    BathInput bath;
    StabilityInput stability;
    TrajectoryInput trajectory;
    QmeInput qme;
    HubbardInput hubbard;
    FeasibilityExtras feasibility;
    CaseStudyInputs case_study;
    PlotInput plot;
    OutputInput output;
};

/// Reads a config, rejecting unknown keys and mistyped fields. Messages carry
/// the dotted field path.
RunConfig config_from_json(const json& j);
json config_to_json(const RunConfig& c);

/// Applies `path=value` to a JSON document. The value is parsed as JSON when
/// possible and taken as a string otherwise.
void apply_override(json& doc, const std::string& assignment);

/// Defaults, then the file (missing fields keep their defaults), then the
/// overrides in order. `command` replaces whatever the file names.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides, Command command);

/// 64-bit FNV-1a of the canonical serialization.
std::uint64_t config_hash(const RunConfig& c);
std::string hex64(std::uint64_t v);

}  // namespace sawtrap::app
