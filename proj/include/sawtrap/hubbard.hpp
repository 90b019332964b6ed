#pragma once

#include <limits>
#include <string>
#include <vector>

#include "sawtrap/gaussian_qme.hpp"
#include "sawtrap/scales.hpp"

namespace sawtrap {

struct HubbardEstimate {
    double t_hop = 0.0;       ///< μeV
    double U_onsite = 0.0;    ///< μeV
    double J_exchange = 0.0;  ///< μeV
    double f_scr = 1.0;
    double d_screen = std::numeric_limits<double>::infinity();  ///< nm
    double lattice_a = 0.0;   ///< nm
    double n_b = 0.0;
    /// Site-energy disorder μᵢ is not modelled; free-text annotation only.
    std::string disorder_note;
};

/// Deep-lattice hopping t/E_S = q²e^{−4n_b}/(2√(2πn_b)). The recoil form is
/// evaluated alongside and must agree to 1e-12 relative.
double tunneling(double q, double n_b, double E_S);

/// t/E_R = (4/√π)(V0/E_R)^{3/4} e^{−2√(V0/E_R)}.
double tunneling_recoil_form(double V0, double E_R);

struct CoulombEstimate {
    double U = 0.0;  ///< μeV
    double f_scr = 1.0;
};

/// U = f_scr·e²/(4πε₀ε_r a) with f_scr = 1 − [1 + 4(d/a)²]^{−1/2}.
CoulombEstimate coulomb_onsite(double lattice_a, double eps_r,
                               double d_screen = std::numeric_limits<double>::infinity());

double screening_factor(double d_over_a);

/// J = 4t²/U.
double exchange(double t_hop, double U_onsite);

HubbardEstimate hubbard_estimate(const DerivedScales& scales, double q, double eps_r,
                                 double d_screen = std::numeric_limits<double>::infinity());

struct FeasibilityExtras {
    double T2_star = 15.0;    ///< ns
    double eps_ad = 0.05;
    double Q = 1e3;
    double V0_phonon = 1.0;   ///< single-phonon amplitude [μeV]
    double P_cool = 1.0;      ///< mW
    double threshold = 0.3;   ///< "≪" as ratio ≤ threshold
    double v_idt_max = 500.0; ///< μeV
    double spin_min = 10.0;   ///< required J·T₂*/ħ
};

struct ChainLink {
    std::string name;
    double lhs = 0.0;  ///< μeV
    double rhs = 0.0;  ///< μeV
    double ratio = 0.0;
    bool pass = false;
};

struct HeatingBudget {
    double W_heat_saw = 0.0;    ///< mW
    double W_heat_total = 0.0;  ///< mW
    double P_cool = 0.0;        ///< mW
    bool ok = false;
};

struct FeasibilityReport {
    std::vector<ChainLink> chain;          ///< ħγ ≪ k_BT ≪ ħω₀ ≪ ħω ≪ E_S
    std::vector<ChainLink> relaxed_chain;  ///< ħγ, k_BT ≪ ħω₀
    bool chain_ok = false;
    bool relaxed_ok = false;
    double V_IDT = 0.0;
    bool v_idt_ok = false;
    bool n_b_ok = false;
    double spin_ratio = 0.0;  ///< J·T₂*/ħ
    bool spin_ok = false;
    HeatingBudget heat;
    double v_eff = 0.0;  ///< m/s
};

/// W_saw = ħω·(V_SAW/V0_phonon)²·(ω/Q); total = 10·W_saw; ok iff total ≤ P_cool.
HeatingBudget heating_budget(const DerivedScales& scales, double V0_phonon, double Q, double P_cool);

/// v_eff = ε_ad·a·ω₀/2π [m/s], with ω₀ in rad/ns and a in nm.
double adiabatic_speed(double lattice_a, double omega0, double eps_ad);

/// One link of the chain: lhs/rhs, passing when ≤ threshold. 0/0 passes.
ChainLink chain_link(std::string name, double lhs, double rhs, double threshold);

FeasibilityReport regime_check(const DerivedScales& scales, const BathParams& bath, const HubbardEstimate& hubbard,
                               const FeasibilityExtras& extras = {});

struct CaseStudyRow {
    double q = 0.0;
    double d_screen = 0.0;  ///< nm
    DerivedScales scales;
    HubbardEstimate hubbard;
};

struct CaseStudyInputs {
    double E_S = 1000.0;          ///< μeV
    double frequency_ghz = 50.0;
    double sound_speed = 18000.0; ///< m/s
    double eps_r = 9.5;
    std::vector<double> q_values{0.5, 0.7};
    std::vector<double> d_values{10.0, 100.0};
};

/// Every (q, d) combination of the exemplary high-velocity setup.
std::vector<CaseStudyRow> case_study(const CaseStudyInputs& inputs = {});

}  // namespace sawtrap
