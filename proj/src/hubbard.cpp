#include "sawtrap/hubbard.hpp"

#include <algorithm>
#include <cmath>

#include "sawtrap/errors.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap {

using units::hbar;
using units::pi;

double tunneling_recoil_form(double V0, double E_R) {
    if (!(E_R > 0.0) || !(V0 >= 0.0)) throw ValidationError("tunneling: need E_R > 0 and V0 >= 0");
    const double s = V0 / E_R;
    return E_R * 4.0 / std::sqrt(pi) * std::pow(s, 0.75) * std::exp(-2.0 * std::sqrt(s));
}

double tunneling(double q, double n_b, double E_S) {
    if (!std::isfinite(n_b) || n_b <= 0.0) throw ValidationError("tunneling: n_b must be > 0");
    if (!std::isfinite(q) || q < 0.0 || !std::isfinite(E_S) || E_S < 0.0)
        throw ValidationError("tunneling: q and E_S must be >= 0");
    const double t = E_S * q * q * std::exp(-4.0 * n_b) / (2.0 * std::sqrt(2.0 * pi * n_b));
    if (t > 0.0) {
        // V0/E_R = 4n_b², V0 = (q²/8)E_S.
        const double V0 = q * q / 8.0 * E_S;
        const double t_r = tunneling_recoil_form(V0, V0 / (4.0 * n_b * n_b));
        if (std::abs(t_r - t) > 1e-12 * t)
            throw NumericalError("tunneling: closed forms disagree", std::abs(t_r - t) / t);
    }
    return t;
}

double screening_factor(double d_over_a) {
    if (std::isinf(d_over_a)) return 1.0;
    return 1.0 - 1.0 / std::sqrt(1.0 + 4.0 * d_over_a * d_over_a);
}

CoulombEstimate coulomb_onsite(double lattice_a, double eps_r, double d_screen) {
    if (!std::isfinite(lattice_a) || lattice_a <= 0.0) throw ValidationError("coulomb_onsite: lattice_a must be > 0");
    if (!std::isfinite(eps_r) || eps_r < 1.0) throw ValidationError("coulomb_onsite: eps_r must be >= 1");
    if (std::isnan(d_screen) || d_screen < 0.0) throw ValidationError("coulomb_onsite: d_screen must be >= 0");
    CoulombEstimate c;
    c.f_scr = screening_factor(d_screen / lattice_a);
    c.U = c.f_scr * units::coulomb / (eps_r * lattice_a);
    return c;
}

double exchange(double t_hop, double U_onsite) {
    if (!(U_onsite > 0.0)) throw ValidationError("exchange: U must be > 0");
    return 4.0 * t_hop * t_hop / U_onsite;
}

HubbardEstimate hubbard_estimate(const DerivedScales& scales, double q, double eps_r, double d_screen) {
    HubbardEstimate h;
    h.lattice_a = scales.lattice_a;
    h.n_b = scales.n_b;
    h.d_screen = d_screen;
    h.t_hop = tunneling(q, scales.n_b, scales.E_S);
    const auto c = coulomb_onsite(scales.lattice_a, eps_r, d_screen);
    h.U_onsite = c.U;
    h.f_scr = c.f_scr;
    h.J_exchange = exchange(h.t_hop, h.U_onsite);
    h.disorder_note = "site disorder not modelled";
    return h;
}

HeatingBudget heating_budget(const DerivedScales& scales, double V0_phonon, double Q, double P_cool) {
    if (!(Q > 0.0) || !(V0_phonon > 0.0)) throw ValidationError("heating_budget: need Q > 0 and V0_phonon > 0");
    if (!(P_cool >= 0.0)) throw ValidationError("heating_budget: P_cool must be >= 0");
    const double omega = scales.hbar_omega / hbar;  // rad/ns
    const double n_ph = std::pow(scales.V_SAW / V0_phonon, 2);
    const double watts = scales.hbar_omega * units::ueV_to_joule * n_ph * (omega / Q) * 1e9;
    HeatingBudget h;
    h.W_heat_saw = watts * 1e3;
    h.W_heat_total = 10.0 * h.W_heat_saw;
    h.P_cool = P_cool;
    h.ok = h.W_heat_total <= P_cool * (1.0 + 1e-12);
    return h;
}

double adiabatic_speed(double lattice_a, double omega0, double eps_ad) {
    if (!(eps_ad > 0.0 && eps_ad < 1.0)) throw ValidationError("adiabatic_speed: eps_ad must be in (0, 1)");
    if (!(lattice_a > 0.0) || !(omega0 >= 0.0)) throw ValidationError("adiabatic_speed: need a > 0, omega0 >= 0");
    return eps_ad * lattice_a * omega0 / (2.0 * pi);  // nm/ns = m/s
}

ChainLink chain_link(std::string name, double lhs, double rhs, double threshold) {
    ChainLink l;
    l.name = std::move(name);
    l.lhs = lhs;
    l.rhs = rhs;
    if (lhs == 0.0)
        l.ratio = 0.0;
    else if (rhs == 0.0)
        l.ratio = INFINITY;
    else
        l.ratio = lhs / rhs;
    l.pass = l.ratio <= threshold;
    return l;
}

FeasibilityReport regime_check(const DerivedScales& scales, const BathParams& bath, const HubbardEstimate& hubbard,
                               const FeasibilityExtras& x) {
    bath.validate();
    if (!(x.T2_star > 0.0) || !(x.threshold > 0.0)) throw ValidationError("regime_check: T2_star and threshold must be > 0");
    FeasibilityReport r;
    const double hg = hbar * bath.gamma;
    const double kT = bath.kT();
    r.chain = {chain_link("hbar_gamma << kT", hg, kT, x.threshold),
               chain_link("kT << hbar_omega0", kT, scales.hbar_omega0, x.threshold),
               chain_link("hbar_omega0 << hbar_omega", scales.hbar_omega0, scales.hbar_omega, x.threshold),
               chain_link("hbar_omega << E_S", scales.hbar_omega, scales.E_S, x.threshold)};
    r.relaxed_chain = {chain_link("hbar_gamma << hbar_omega0", hg, scales.hbar_omega0, x.threshold),
                       chain_link("kT << hbar_omega0", kT, scales.hbar_omega0, x.threshold),
                       r.chain[2], r.chain[3]};
    r.chain_ok = std::all_of(r.chain.begin(), r.chain.end(), [](const auto& l) { return l.pass; });
    r.relaxed_ok = std::all_of(r.relaxed_chain.begin(), r.relaxed_chain.end(), [](const auto& l) { return l.pass; });
    r.V_IDT = scales.V_IDT;
    r.v_idt_ok = scales.V_IDT <= x.v_idt_max;
    r.n_b_ok = scales.n_b >= 1.0;
    r.spin_ratio = hubbard.J_exchange * x.T2_star / hbar;
    r.spin_ok = r.spin_ratio >= x.spin_min;
    r.heat = heating_budget(scales, x.V0_phonon, x.Q, x.P_cool);
    r.v_eff = adiabatic_speed(scales.lattice_a, scales.hbar_omega0 / hbar, x.eps_ad);
    return r;
}

std::vector<CaseStudyRow> case_study(const CaseStudyInputs& in) {
    const auto material = MaterialSystem::from_sound_energy("case study", in.E_S, in.sound_speed, in.eps_r);
    std::vector<CaseStudyRow> rows;
    for (double q : in.q_values) {
        const auto drive = DriveConfig::monochromatic_drive(in.frequency_ghz, q);
        const auto s = derived_scales(material, drive, ExpansionOrder::second);
        for (double d : in.d_values) rows.push_back({q, d, s, hubbard_estimate(s, q, in.eps_r, d)});
    }
    return rows;
}

}  // namespace sawtrap
