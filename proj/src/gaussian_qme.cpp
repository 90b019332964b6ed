#include "sawtrap/gaussian_qme.hpp"

#include <algorithm>
#include <cmath>

#include "sawtrap/units.hpp"

namespace sawtrap {

using units::hbar;

void BathParams::validate() const {
    if (!std::isfinite(gamma) || gamma < 0.0) throw ValidationError("bath: gamma must be >= 0");
    if (!std::isfinite(temperature) || temperature < 0.0) throw ValidationError("bath: temperature must be >= 0");
    if (zeta && (!std::isfinite(*zeta) || *zeta < 0.0)) throw ValidationError("bath: zeta must be >= 0");
}

double BathParams::kT() const { return units::kelvin_to_ueV(temperature); }

BathParams BathParams::ohmic(double omega0, double temperature, double zeta) {
    BathParams b;
    b.gamma = zeta * omega0;
    b.temperature = temperature;
    b.zeta = zeta;
    b.validate();
    return b;
}

BathParams BathParams::from_kT(double gamma, double kT_ueV) {
    BathParams b;
    b.gamma = gamma;
    b.temperature = kT_ueV / units::k_boltzmann;
    b.validate();
    return b;
}

double thermal_occupation(double nu, double kT) {
    if (nu == 0.0) throw ValidationError("thermal_occupation: zero frequency");
    if (kT <= 0.0) return nu > 0.0 ? 0.0 : -1.0;
    return 1.0 / std::expm1(hbar * nu / kT);
}

FloquetMode physical_mode(double q, double omega, int n_trunc) { return floquet_coefficients(-q, omega, n_trunc); }

// ---------------------------------------------------------------------------

double ShiftCoefficients::commutator_norm() const {
    const std::complex<double> v = std::complex<double>(0.0, hbar) * (alpha_x * std::conj(beta_p) - std::conj(alpha_x) * beta_p);
    return v.real();
}

namespace {

ShiftCoefficients coefficients_from(const ModeValue& v, double m, double omega0, double t) {
    const double s = std::sqrt(2.0 * m * hbar * omega0);
    ShiftCoefficients c;
    c.alpha_x = std::complex<double>(0.0, -1.0) * std::sqrt(m / (2.0 * hbar * omega0)) * v.u_dot;
    c.beta_p = std::complex<double>(0.0, 1.0) * v.u / s;
    c.t = t;
    return c;
}

}  // namespace

ShiftCoefficients shift_coefficients(const FloquetMode& mode, double m, double t) {
    if (!(mode.omega0 > 0.0)) throw ValidationError("untrapped mode: omega0 = 0");
    if (!(m > 0.0)) throw ValidationError("shift_coefficients: mass must be > 0");
    return coefficients_from(evaluate_mode(mode, t), m, mode.omega0, t);
}

// ---------------------------------------------------------------------------

MomentState::Raw MomentState::raw() const {
    return {mean_x, mean_p, var_x + mean_x * mean_x, var_p + mean_p * mean_p, 2.0 * (cov_sym + mean_x * mean_p)};
}

MomentState MomentState::from_raw(const Raw& v) {
    MomentState s;
    s.mean_x = v[0];
    s.mean_p = v[1];
    s.var_x = v[2] - v[0] * v[0];
    s.var_p = v[3] - v[1] * v[1];
    s.cov_sym = 0.5 * v[4] - v[0] * v[1];
    return s;
}

double MomentState::uncertainty_excess() const { return var_x * var_p - cov_sym * cov_sym - 0.25 * hbar * hbar; }

void MomentState::validate() const {
    for (double v : {mean_x, mean_p, var_x, var_p, cov_sym})
        if (!std::isfinite(v)) throw ValidationError("moment state: entries must be finite");
    if (!(var_x > 0.0) || !(var_p > 0.0)) throw ValidationError("moment state: variances must be > 0");
    if (uncertainty_excess() < -1e-8 * 0.25 * hbar * hbar)
        throw ValidationError("moment state: violates the uncertainty relation");
}

MomentState MomentState::displaced_thermal(double mean_x, double mean_p, double nbar, double m, double omega0) {
    if (!(m > 0.0) || !(omega0 > 0.0) || !(nbar >= 0.0))
        throw ValidationError("displaced_thermal: need m > 0, omega0 > 0, nbar >= 0");
    MomentState s;
    s.mean_x = mean_x;
    s.mean_p = mean_p;
    s.var_x = (2.0 * nbar + 1.0) * hbar / (2.0 * m * omega0);
    s.var_p = (2.0 * nbar + 1.0) * hbar * m * omega0 / 2.0;
    return s;
}

MomentState MomentState::coherent_scaled(double x_s, double p_s, double m, double omega0) {
    const double ell = std::sqrt(hbar / (m * omega0));
    return displaced_thermal(x_s * ell, p_s * hbar / ell, 0.0, m, omega0);
}

// ---------------------------------------------------------------------------

EffectiveOccupation effective_occupation(const FloquetMode& mode, const BathParams& bath) {
    bath.validate();
    if (!(mode.omega0 > 0.0)) throw ValidationError("untrapped mode: omega0 = 0");
    const double kT = bath.kT();
    EffectiveOccupation occ;
    for (int n = -mode.n_trunc; n <= mode.n_trunc; ++n) {
        const double c = mode.c(n);
        if (c == 0.0) continue;
        const double nu = mode.omega0 + n * mode.omega;
        const double term = c * c * nu / mode.omega0 * thermal_occupation(nu, kT);
        occ.terms.emplace_back(n, term);
        occ.N += term;
    }
    return occ;
}

// ---------------------------------------------------------------------------

namespace {

void set_scales(double m, double omega0, double& ell, std::array<double, 5>& scale) {
    ell = std::sqrt(hbar / (m * omega0));
    const double pu = hbar / ell;
    scale = {1.0 / ell, 1.0 / pu, 1.0 / (ell * ell), 1.0 / (pu * pu), 1.0 / hbar};
}

}  // namespace

MomentODE MomentODE::floquet(const FloquetMode& mode, double m, const BathParams& bath) {
    bath.validate();
    if (!(m > 0.0)) throw ValidationError("moment ODE: mass must be > 0");
    if (!(mode.omega0 > 0.0)) throw ValidationError("untrapped mode: omega0 = 0");
    MomentODE o;
    o.mode_ = mode;
    o.m_ = m;
    o.omega0_ = mode.omega0;
    o.gamma_ = bath.gamma;
    o.N_ = effective_occupation(mode, bath).N;
    set_scales(m, o.omega0_, o.ell_, o.scale_);
    return o;
}

MomentODE MomentODE::reference(double omega0, double m, const BathParams& bath) {
    bath.validate();
    if (!(m > 0.0) || !(omega0 > 0.0)) throw ValidationError("reference oscillator: need m > 0, omega0 > 0");
    MomentODE o;
    o.m_ = m;
    o.omega0_ = omega0;
    o.gamma_ = bath.gamma;
    o.N_ = thermal_occupation(omega0, bath.kT());
    set_scales(m, omega0, o.ell_, o.scale_);
    return o;
}

double MomentODE::W(double t) const {
    if (!mode_) return omega0_ * omega0_;
    return 0.5 * mode_->omega * mode_->omega * mode_->q * std::cos(mode_->omega * t);
}

ModeValue MomentODE::mode_value(double t) const {
    if (mode_) return evaluate_mode(*mode_, t);
    const auto e = std::polar(1.0, omega0_ * t);
    return {e, std::complex<double>(0.0, omega0_) * e};
}

ShiftCoefficients MomentODE::shift(double t) const { return coefficients_from(mode_value(t), m_, omega0_, t); }

void MomentODE::evaluate(double t, Matrix5& M, Vector5& C) const {
    const double w = W(t);
    const auto sc = shift(t);
    const double g = gamma_;
    const double diff = g * (2.0 * N_ + 1.0) * hbar * hbar;
    for (auto& row : M) row.fill(0.0);
    M[0][0] = -0.5 * g;
    M[0][1] = 1.0 / m_;
    M[1][0] = -m_ * w;
    M[1][1] = -0.5 * g;
    M[2][2] = -g;
    M[2][4] = 1.0 / m_;
    M[3][3] = -g;
    M[3][4] = -m_ * w;
    M[4][2] = -2.0 * m_ * w;
    M[4][3] = 2.0 / m_;
    M[4][4] = -g;
    C = {0.0, 0.0, diff * std::norm(sc.beta_p), diff * std::norm(sc.alpha_x),
         -2.0 * diff * (std::conj(sc.alpha_x) * sc.beta_p).real()};
}

void MomentODE::scaled_rhs(const Vector5& y, Vector5& dy, double t) const {
    Matrix5 M;
    Vector5 C;
    evaluate(t, M, C);
    for (int i = 0; i < 5; ++i) {
        double acc = scale_[i] * C[i];
        for (int j = 0; j < 5; ++j)
            if (M[i][j] != 0.0) acc += scale_[i] * M[i][j] / scale_[j] * y[j];
        dy[i] = acc;
    }
}

Vector5 MomentODE::to_scaled(const MomentState::Raw& v) const {
    Vector5 y;
    for (int i = 0; i < 5; ++i) y[i] = v[i] * scale_[i];
    return y;
}

MomentState::Raw MomentODE::from_scaled(const Vector5& y) const {
    MomentState::Raw v;
    for (int i = 0; i < 5; ++i) v[i] = y[i] / scale_[i];
    return v;
}

MomentODE assemble_moment_ode(const FloquetMode& mode, double m, const BathParams& bath) {
    return MomentODE::floquet(mode, m, bath);
}

// ---------------------------------------------------------------------------

MomentTrajectory propagate_moments(const MomentState& state0, const MomentODE& ode, double t_end, double stride,
                                   const ode::Tolerance& tol) {
    state0.validate();
    if (!std::isfinite(t_end) || t_end < 0.0) throw ValidationError("propagate_moments: t_end must be >= 0");
    const double floor = 0.25 * hbar * hbar;

    Vector5 y = ode.to_scaled(state0.raw());
    MomentTrajectory out;
    auto rhs = [&ode](const Vector5& x, Vector5& dx, double t) { ode.scaled_rhs(x, dx, t); };
    out.stats = ode::integrate_sampled(rhs, y, 0.0, t_end, stride, tol, [&](double t, const Vector5& s) {
        const auto state = MomentState::from_raw(ode.from_scaled(s));
        const double excess = state.uncertainty_excess();
        if (excess < -1e-8 * floor)
            throw NumericalError("propagate_moments: uncertainty relation violated at t = " + std::to_string(t),
                                 -excess / floor);
        out.samples.push_back({t, state});
        return true;
    });
    return out;
}

MomentTrajectory reference_oscillator(const MomentState& state0, double omega0, double m, const BathParams& bath,
                                      double t_end, double stride, const ode::Tolerance& tol) {
    return propagate_moments(state0, MomentODE::reference(omega0, m, bath), t_end, stride, tol);
}

KineticEnergy averaged_kinetic_energy(const FloquetMode& mode) {
    if (!(mode.omega0 > 0.0)) throw ValidationError("untrapped mode: omega0 = 0");
    KineticEnergy k;
    k.zero_point = 0.25 * hbar * mode.omega0;
    double heat = 0.0;
    double total = 0.0;
    for (int n = -mode.n_trunc; n <= mode.n_trunc; ++n) {
        const double c = mode.c(n);
        const double nu = mode.omega0 + n * mode.omega;
        const double term = c * c * nu * nu;
        total += term;
        if (n != 0) heat += term;
    }
    k.total = hbar / (4.0 * mode.omega0) * total;
    k.delta_heat = hbar / (4.0 * mode.omega0) * heat;
    return k;
}

QuasiStationarity detect_quasistationary(const MomentTrajectory& traj, double omega, double threshold) {
    if (!(omega > 0.0)) throw ValidationError("detect_quasistationary: omega must be > 0");
    const auto& s = traj.samples;
    if (s.size() < 3) throw ValidationError("detect_quasistationary: trajectory too short");
    const double stride = s[1].t - s[0].t;
    const double period = 2.0 * units::pi / omega;
    const double ratio = period / stride;
    const auto k = static_cast<std::size_t>(std::llround(ratio));
    if (k == 0 || std::abs(ratio - static_cast<double>(k)) > 1e-6 * ratio)
        throw ValidationError("detect_quasistationary: sample stride must divide the drive period");
    // The final sample sits at t_end, which need not lie on the stride grid.
    std::size_t last = s.size() - 1;
    const double pos = (s[last].t - s[0].t) / stride;
    if (std::abs(pos - std::round(pos)) > 1e-9 * std::max(1.0, pos)) --last;
    if (last < 2 * k) throw ValidationError("detect_quasistationary: need two full drive periods");

    double sx2 = 0.0, sp2 = 0.0;
    double lo_x = s[last].state.var_x, hi_x = lo_x, lo_p = s[last].state.var_p, hi_p = lo_p;
    double lo_c = s[last].state.cov_sym, hi_c = lo_c;
    for (std::size_t j = 0; j <= k; ++j) {
        const auto& st = s[last - j].state;
        sx2 = std::max(sx2, std::abs(st.var_x));
        sp2 = std::max(sp2, std::abs(st.var_p));
        lo_x = std::min(lo_x, st.var_x), hi_x = std::max(hi_x, st.var_x);
        lo_p = std::min(lo_p, st.var_p), hi_p = std::max(hi_p, st.var_p);
        lo_c = std::min(lo_c, st.cov_sym), hi_c = std::max(hi_c, st.cov_sym);
    }
    const double sc = std::sqrt(sx2 * sp2);
    const double sx = std::sqrt(sx2), sp = std::sqrt(sp2);

    QuasiStationarity out;
    for (std::size_t j = 0; j <= k; ++j) {
        const auto& a = s[last - j].state;
        const auto& b = s[last - j - k].state;
        out.deviation = std::max({out.deviation, std::abs(a.mean_x - b.mean_x) / sx,
                                  std::abs(a.mean_p - b.mean_p) / sp, std::abs(a.var_x - b.var_x) / sx2,
                                  std::abs(a.var_p - b.var_p) / sp2, std::abs(a.cov_sym - b.cov_sym) / sc});
    }
    out.quasi_stationary = out.deviation < threshold;
    const double ripple = std::max({(hi_x - lo_x) / sx2, (hi_p - lo_p) / sp2, (hi_c - lo_c) / sc});
    out.constant = out.quasi_stationary && ripple < threshold;
    out.period_tau = out.quasi_stationary ? units::pi : 0.0;
    return out;
}

bool lamb_dicke_ok(const MomentState& s, double wavenumber, Diagnostics* diag, double limit) {
    const double kx = wavenumber * std::abs(s.mean_x);
    const double ks = wavenumber * std::sqrt(std::max(s.var_x, 0.0));
    bool ok = true;
    if (kx > limit) {
        warn(diag, "Lamb-Dicke: k|<x>| = " + std::to_string(kx) + " exceeds " + std::to_string(limit));
        ok = false;
    }
    if (ks > limit) {
        warn(diag, "Lamb-Dicke: k*sigma_x = " + std::to_string(ks) + " exceeds " + std::to_string(limit));
        ok = false;
    }
    return ok;
}

bool markov_regime_ok(const BathParams& bath, double omega0, Diagnostics* diag, double limit) {
    bath.validate();
    const double kT = bath.kT();
    const double hg = hbar * bath.gamma;
    const double hw0 = hbar * omega0;
    bool ok = true;
    const double r1 = kT > 0.0 ? hg / kT : (hg > 0.0 ? INFINITY : 0.0);
    if (r1 > limit) {
        warn(diag, "Born-Markov: hbar*gamma/kT = " + std::to_string(r1) + " exceeds " + std::to_string(limit));
        ok = false;
    }
    const double r2 = hw0 > 0.0 ? kT / hw0 : INFINITY;
    if (r2 > limit) {
        warn(diag, "Born-Markov: kT/hbar*omega0 = " + std::to_string(r2) + " exceeds " + std::to_string(limit));
        ok = false;
    }
    return ok;
}

}  // namespace sawtrap
