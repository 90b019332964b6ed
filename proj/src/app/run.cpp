#include "sawtrap/app/run.hpp"

#include <cmath>
#include <ostream>

#include "sawtrap/app/export.hpp"
#include "sawtrap/app/svg.hpp"
#include "sawtrap/classical.hpp"
#include "sawtrap/gaussian_qme.hpp"
#include "sawtrap/hubbard.hpp"
#include "sawtrap/pseudopotential.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap::app {

namespace fs = std::filesystem;
using units::hbar;
using units::pi;

namespace {

json tol_json(const ode::Tolerance& t) { return {{"rel", t.rel}, {"abs", t.abs}}; }

json scales_json(const DerivedScales& s) {
    return {{"E_S", s.E_S},
            {"E_R", s.E_R},
            {"V_SAW", s.V_SAW},
            {"V_IDT", s.V_IDT},
            {"hbar_omega", s.hbar_omega},
            {"hbar_omega0", s.hbar_omega0},
            {"V0", s.V0},
            {"eps", s.eps},
            {"q_tilde", s.q_tilde},
            {"n_b", s.n_b},
            {"lattice_a", s.lattice_a},
            {"wavelength", s.wavelength},
            {"wavenumber", s.wavenumber},
            {"order", static_cast<int>(s.order)}};
}

json hubbard_json(const HubbardEstimate& h) {
    return {{"t_hop", h.t_hop},
            {"U_onsite", h.U_onsite},
            {"J_exchange", h.J_exchange},
            {"f_scr", h.f_scr},
            {"d_screen", std::isinf(h.d_screen) ? json(nullptr) : json(h.d_screen)},
            {"lattice_a", h.lattice_a},
            {"n_b", h.n_b},
            {"disorder_note", h.disorder_note}};
}

json links_json(const std::vector<ChainLink>& links) {
    json out = json::array();
    for (const auto& l : links)
        out.push_back({{"name", l.name}, {"lhs", l.lhs}, {"rhs", l.rhs}, {"ratio", std::isinf(l.ratio) ? json("inf") : json(l.ratio)}, {"pass", l.pass}});
    return out;
}

struct Ctx {
    const RunConfig& cfg;
    std::ostream& log;
    fs::path dir;
    std::string prefix;
    std::vector<fs::path> written;

    fs::path file(const std::string& suffix) const { return dir / (prefix + suffix); }
    void wrote(const fs::path& p) {
        written.push_back(p);
        log << "wrote " << p.string() << "\n";
    }
    void dataset(const fs::path& p, const json& extra) {
        wrote(p);
        write_sidecar(p, cfg, extra);
        fs::path m = p;
        m += ".meta.json";
        wrote(m);
    }
};

ExpansionOrder order_of(const RunConfig& c) { return c.order == 4 ? ExpansionOrder::fourth : ExpansionOrder::second; }

BathParams make_bath(const BathInput& b, double omega0) {
    const double gamma = b.zeta ? *b.zeta * omega0 : b.gamma_over_omega0 * omega0;
    if (b.temperature_K) {
        BathParams p;
        p.gamma = gamma;
        p.temperature = *b.temperature_K;
        p.zeta = b.zeta;
        p.validate();
        return p;
    }
    auto p = BathParams::from_kT(gamma, b.kT_over_hbar_omega0 * hbar * omega0);
    p.zeta = b.zeta;
    return p;
}

void cmd_scales(Ctx& x) {
    const auto mat = resolve_material(x.cfg);
    const auto s = derived_scales(mat, x.cfg.drive, order_of(x.cfg));
    const auto p = x.file(".json");
    json report = {{"material", {{"name", mat.name}, {"mass_m0", mat.carrier_mass}, {"sound_speed", mat.sound_speed}, {"eps_r", mat.dielectric_rel}}},
                   {"q", x.cfg.drive.stability_q},
                   {"scales", scales_json(s)}};
    if (x.cfg.drive.stability_q > 0.0 && x.cfg.drive.stability_q < first_region_edge) {
        const auto ce = characteristic_exponent(x.cfg.drive.stability_q);
        report["floquet"] = {{"beta", ce.beta}, {"omega0_over_omega", ce.beta / 2.0}};
    }
    write_text(p, report.dump(2) + "\n");
    x.dataset(p, json::object());
    x.log << "E_S = " << s.E_S << " ueV, hbar*omega0 = " << s.hbar_omega0 << " ueV, n_b = " << s.n_b << "\n";
}

void cmd_stability(Ctx& x) {
    const auto& st = x.cfg.stability;
    const auto qg = st.q.resolve("stability.q");
    const auto tg = st.theta.resolve("stability.theta");
    if (tg.front() < 0.0) throw ValidationError("stability.theta: temperatures must be >= 0");
    if (st.samples_per_cell < 1) throw ValidationError("stability.samples_per_cell: must be >= 1");
    DiagramOptions opt;
    opt.tau_max = st.tau_max;
    opt.samples_per_cell = st.samples_per_cell;
    opt.seed = x.cfg.seed;
    opt.probe_displacement = st.probe_displacement;
    if (st.criterion == "half_lattice") {
        if (st.mfp_limit) throw ValidationError("stability.mfp_limit: only valid with criterion mean_free_path");
    } else if (st.criterion == "mean_free_path") {
        if (!st.mfp_limit) throw ValidationError("stability.mfp_limit: required for criterion mean_free_path");
        opt.criterion = CriterionSpec::mean_free_path(*st.mfp_limit);
    } else {
        throw ValidationError("stability.criterion: expected half_lattice or mean_free_path");
    }
    const auto d = st.parallel ? stability_diagram(qg, tg, x.cfg.drive, opt) : stability_diagram_serial(qg, tg, x.cfg.drive, opt);

    CsvTable t{{"q", "theta", "fraction_stable", "max_excursion_median"}, {}};
    for (std::size_t it = 0; it < tg.size(); ++it)
        for (std::size_t iq = 0; iq < qg.size(); ++iq) {
            const auto& c = d.at(iq, it);
            t.rows.push_back({qg[iq], tg[it], c.fraction_stable, c.max_excursion_median});
        }
    const auto csv = x.file(".csv");
    write_csv(csv, t);
    x.dataset(csv, {{"tau_max", opt.tau_max},
                    {"samples_per_cell", opt.samples_per_cell},
                    {"criterion", st.criterion},
                    {"stable_fraction_threshold", trapped_fraction_threshold()},
                    {"tolerances", {{"classical", tol_json({1e-10, 1e-12})}}}});
    const auto svg = x.file(".svg");
    emit_plot(csv, PlotKind::heatmap, svg);
    x.wrote(svg);
    x.log << "lobe max theta over grid: " << lobe_max_theta(d, qg.front(), qg.back()) << "\n";
}

void cmd_trajectory(Ctx& x) {
    const auto& tr = x.cfg.trajectory;
    if (!(tr.stride > 0.0)) throw ValidationError("trajectory.stride: must be > 0");
    if (!(tr.tau_max > 0.0)) throw ValidationError("trajectory.tau_max: must be > 0");
    const ode::Tolerance tol{1e-10, 1e-12};
    const auto traj = integrate_trajectory(x.cfg.drive.stability_q, {tr.x0, tr.v0, 0.0}, x.cfg.drive, tr.tau_max, tr.stride, tol);
    CsvTable t{{"tau", "x_tilde", "v_tilde"}, {}};
    for (const auto& s : traj.samples) t.rows.push_back({s.tau, s.x_tilde, s.v_tilde});
    const auto csv = x.file(".csv");
    write_csv(csv, t);
    x.dataset(csv, {{"tolerances", {{"classical", tol_json(tol)}}}, {"steps", traj.stats.accepted}});
    const auto svg = x.file(".svg");
    emit_plot(csv, PlotKind::trajectory, svg);
    x.wrote(svg);
}

void cmd_qme(Ctx& x) {
    const auto& cfg = x.cfg;
    if (!cfg.drive.monochromatic()) throw ValidationError("drive.harmonics: qme needs a monochromatic drive");
    if (cfg.qme.samples_per_period < 1) throw ValidationError("qme.samples_per_period: must be >= 1");
    if (!(cfg.qme.secular_periods > 0.0)) throw ValidationError("qme.secular_periods: must be > 0");
    const auto mat = resolve_material(cfg);
    const double m = mat.mass();
    const double omega = cfg.drive.omega();
    const auto mode = physical_mode(cfg.drive.stability_q, omega);
    if (!(mode.omega0 > 0.0)) throw ValidationError("drive.q: untrapped mode (omega0 = 0)");
    const auto bath = make_bath(cfg.bath, mode.omega0);
    const auto s0 = MomentState::displaced_thermal(cfg.qme.x_scaled * std::sqrt(hbar / (m * mode.omega0)),
                                                   cfg.qme.p_scaled * std::sqrt(hbar * m * mode.omega0), cfg.qme.nbar, m,
                                                   mode.omega0);
    const double t_end = cfg.qme.secular_periods * 2.0 * pi / mode.omega0;
    const double stride = 2.0 * pi / omega / cfg.qme.samples_per_period;
    const ode::Tolerance tol{1e-10, 1e-12};

    Diagnostics diag;
    markov_regime_ok(bath, mode.omega0, &diag);
    const auto ode = assemble_moment_ode(mode, m, bath);
    const auto traj = propagate_moments(s0, ode, t_end, stride, tol);
    const auto ref = reference_oscillator(s0, mode.omega0, m, bath, t_end, stride, tol);
    const double k = 2.0 * pi * cfg.drive.frequency_ghz / mat.sound_speed;  // SAW wavenumber [1/nm]
    for (const auto& s : traj.samples)
        if (!lamb_dicke_ok(s.state, k, &diag)) break;

    const auto table = [&](const MomentTrajectory& tr) {
        CsvTable t{{"t", "tau", "mean_x", "mean_p", "var_x", "var_p", "cov_sym"}, {}};
        for (const auto& s : tr.samples)
            t.rows.push_back({s.t, 0.5 * omega * s.t, s.state.mean_x, s.state.mean_p, s.state.var_x, s.state.var_p, s.state.cov_sym});
        return t;
    };
    json extra = {{"omega", omega},
                  {"omega0", mode.omega0},
                  {"beta", mode.beta_exp},
                  {"N", ode.occupation()},
                  {"gamma", bath.gamma},
                  {"kT", bath.kT()},
                  {"mass_m0", mat.carrier_mass},
                  {"t_end", t_end},
                  {"tolerances", {{"moments", tol_json(tol)}}}};
    const auto ke = averaged_kinetic_energy(mode);
    extra["kinetic_energy"] = {{"zero_point", ke.zero_point}, {"delta_heat", ke.delta_heat}, {"total", ke.total}};
    if (t_end * bath.gamma >= 5.0) {
        const auto qs = detect_quasistationary(traj, omega);
        extra["quasi_stationary"] = {{"verdict", qs.quasi_stationary}, {"deviation", qs.deviation}, {"period_tau", qs.period_tau}};
    }
    if (cfg.qme.fock) {
        FockOptions fo;
        fo.n_max = cfg.qme.fock_n_max;
        const auto f = fock_oracle(mode, m, bath, s0, t_end, stride, fo);
        extra["fock"] = {{"n_max_start", f.n_max_start},
                         {"n_max_used", f.n_max},
                         {"convergence", f.convergence},
                         {"relative_error", relative_moment_error(traj, f)},
                         {"tolerances", tol_json(fo.tol)}};
        x.log << "fock oracle n_max " << f.n_max << ": relative error " << relative_moment_error(traj, f) << "\n";
    }
    extra["warnings"] = diag.warnings;
    for (const auto& w : diag.warnings) x.log << "warning: " << w << "\n";

    const auto csv = x.file(".csv");
    write_csv(csv, table(traj));
    x.dataset(csv, extra);
    const auto rcsv = x.file("_reference.csv");
    write_csv(rcsv, table(ref));
    x.dataset(rcsv, {{"omega0", mode.omega0}, {"nbar_th", thermal_occupation(mode.omega0, bath.kT())}, {"tolerances", {{"moments", tol_json(tol)}}}});
    const auto svg = x.file("_trajectory.svg");
    emit_plot(csv, PlotKind::trajectory, svg, rcsv);
    x.wrote(svg);
    const auto msvg = x.file("_moments.svg");
    emit_plot(csv, PlotKind::moments, msvg);
    x.wrote(msvg);
    x.log << "omega0/omega = " << mode.omega0 / omega << ", N = " << ode.occupation() << "\n";
}

double eps_r_of(const RunConfig& c, const MaterialSystem& m) { return c.material.eps_r ? *c.material.eps_r : m.dielectric_rel; }

double d_screen_of(const RunConfig& c) {
    if (!c.hubbard.d_screen) return INFINITY;
    if (*c.hubbard.d_screen < 0.0) throw ValidationError("hubbard.d_screen: must be >= 0");
    return *c.hubbard.d_screen;
}

void cmd_hubbard(Ctx& x) {
    const auto mat = resolve_material(x.cfg);
    const auto s = derived_scales(mat, x.cfg.drive, order_of(x.cfg));
    const auto h = hubbard_estimate(s, x.cfg.drive.stability_q, eps_r_of(x.cfg, mat), d_screen_of(x.cfg));
    const auto p = x.file(".json");
    write_text(p, json{{"scales", scales_json(s)}, {"hubbard", hubbard_json(h)}}.dump(2) + "\n");
    x.dataset(p, json::object());
    x.log << "t = " << h.t_hop << " ueV, U = " << h.U_onsite << " ueV, J = " << h.J_exchange << " ueV\n";
}

void cmd_feasibility(Ctx& x) {
    const auto mat = resolve_material(x.cfg);
    const auto s = derived_scales(mat, x.cfg.drive, order_of(x.cfg));
    const double omega0 = s.hbar_omega0 / hbar;
    const auto bath = make_bath(x.cfg.bath, omega0);
    const auto h = hubbard_estimate(s, x.cfg.drive.stability_q, eps_r_of(x.cfg, mat), d_screen_of(x.cfg));
    const auto r = regime_check(s, bath, h, x.cfg.feasibility);
    json report = {{"chain", links_json(r.chain)},
                   {"chain_ok", r.chain_ok},
                   {"relaxed_chain", links_json(r.relaxed_chain)},
                   {"relaxed_ok", r.relaxed_ok},
                   {"V_IDT", r.V_IDT},
                   {"v_idt_ok", r.v_idt_ok},
                   {"n_b", s.n_b},
                   {"n_b_ok", r.n_b_ok},
                   {"spin_ratio", r.spin_ratio},
                   {"spin_ok", r.spin_ok},
                   {"heat", {{"W_heat_saw", r.heat.W_heat_saw}, {"W_heat_total", r.heat.W_heat_total}, {"P_cool", r.heat.P_cool}, {"ok", r.heat.ok}}},
                   {"v_eff", r.v_eff},
                   {"hubbard", hubbard_json(h)},
                   {"scales", scales_json(s)}};
    const auto p = x.file(".json");
    write_text(p, report.dump(2) + "\n");
    x.dataset(p, json::object());
    x.log << "chain " << (r.chain_ok ? "passes" : "fails") << ", relaxed chain " << (r.relaxed_ok ? "passes" : "fails") << "\n";
}

void cmd_case_study(Ctx& x) {
    const auto rows = case_study(x.cfg.case_study);
    CsvTable t{{"q", "d_screen", "hbar_omega", "hbar_omega0", "V0", "n_b", "lattice_a", "t_hop", "U_onsite", "J_exchange"}, {}};
    for (const auto& r : rows)
        t.rows.push_back({r.q, r.d_screen, r.scales.hbar_omega, r.scales.hbar_omega0, r.scales.V0, r.scales.n_b, r.scales.lattice_a,
                          r.hubbard.t_hop, r.hubbard.U_onsite, r.hubbard.J_exchange});
    const auto csv = x.file(".csv");
    write_csv(csv, t);
    x.dataset(csv, json::object());
}

void cmd_plot(Ctx& x) {
    const auto& p = x.cfg.plot;
    if (p.dataset.empty()) throw ValidationError("plot.dataset: required");
    const fs::path out = p.output.empty() ? fs::path(p.dataset).replace_extension(".svg") : fs::path(p.output);
    emit_plot(p.dataset, parse_plot_kind(p.kind), out, p.overlay);
    x.wrote(out);
}

}  // namespace

MaterialSystem resolve_material(const RunConfig& c) {
    const auto& in = c.material;
    MaterialSystem m;
    if (!in.preset.empty()) {
        const auto presets = load_material_presets(c.catalog.empty() ? default_catalog_path() : std::filesystem::path(c.catalog));
        const auto& p = find_preset(presets, in.preset);
        m = in.sound_speed ? p.at(*in.sound_speed) : p.at_max();
    } else {
        if (!in.sound_speed) throw ValidationError("material.sound_speed: required without a preset");
        if (!in.mass_m0 && !in.sound_energy) throw ValidationError("material.mass_m0: required without a preset");
        if (!in.eps_r) throw ValidationError("material.eps_r: required without a preset");
        m.name = "custom";
        m.sound_speed = *in.sound_speed;
        m.dielectric_rel = *in.eps_r;
        m.carrier_mass = in.mass_m0 ? *in.mass_m0 : 0.0;
    }
    if (in.mass_m0) m.carrier_mass = *in.mass_m0;
    if (in.eps_r) m.dielectric_rel = *in.eps_r;
    if (in.sound_energy) {
        if (in.mass_m0) throw ValidationError("material.sound_energy: conflicts with material.mass_m0");
        m = MaterialSystem::from_sound_energy(m.name, *in.sound_energy, m.sound_speed, m.dielectric_rel);
    }
    m.validate();
    return m;
}

std::vector<fs::path> run(const RunConfig& config, std::ostream& log) {
    config.drive.validate();
    Ctx x{config, log, {}, config.output.prefix.empty() ? to_string(config.command) : config.output.prefix, {}};
    if (config.command != Command::plot) x.dir = prepare_output_dir(config.output.dir);
    switch (config.command) {
        case Command::scales: cmd_scales(x); break;
        case Command::stability: cmd_stability(x); break;
        case Command::trajectory: cmd_trajectory(x); break;
        case Command::qme: cmd_qme(x); break;
        case Command::hubbard: cmd_hubbard(x); break;
        case Command::feasibility: cmd_feasibility(x); break;
        case Command::case_study: cmd_case_study(x); break;
        case Command::plot: cmd_plot(x); break;
    }
    return x.written;
}

}  // namespace sawtrap::app
