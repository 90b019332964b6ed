#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include <boost/math/special_functions/laguerre.hpp>

#include "sawtrap/gaussian_qme.hpp"
#include "sawtrap/units.hpp"

namespace sawtrap {

namespace {

using cplx = std::complex<double>;
using units::hbar;

// Fused generator. With L = λ₋a + λ₊a† the dissipators collapse to
//   −½{X, ρ} + P·aρa† + Q·a†ρa + Gc·aρa + Gc̄·a†ρa†,
//   X = P·n + Q·(n+1) + Gc·a² + Gc̄·a†²,
// P = g₁|λ₋|² + g₂|λ₊|², Q = g₁|λ₊|² + g₂|λ₋|², G = g₁+g₂, c = λ₋λ̄₊.
// The state holds the upper triangle of ρ row by row. It is unpacked into a
// buffer with two zero rows/columns on each side so the five-point stencil
// runs without edge branches.
struct Work {
    int n;
    int w;                    // padded width n + 4
    std::vector<double> s1;   // √k, indexed k + 2
    std::vector<double> s2;   // √(k(k−1)), indexed k + 2
    std::vector<cplx> pad;
    std::vector<int> off;     // start of row i in the packed triangle

    explicit Work(int dim) : n(dim), w(dim + 4), s1(static_cast<std::size_t>(dim + 6)), s2(s1.size()),
                             pad(static_cast<std::size_t>(w * w)), off(static_cast<std::size_t>(dim)) {
        for (int i = 0; i < dim; ++i) off[static_cast<std::size_t>(i)] = i * dim - i * (i - 1) / 2;
        for (int k = -2; k < dim + 4; ++k) {
            const double kk = std::max(k, 0);
            s1[static_cast<std::size_t>(k + 2)] = std::sqrt(kk);
            s2[static_cast<std::size_t>(k + 2)] = k >= 1 ? std::sqrt(kk * (kk - 1.0)) : 0.0;
        }
    }
};

struct FockSystem {
    const FloquetMode* mode;
    double omega0;
    double gamma;
    double N;
    Work* buffers;  // odeint copies the system on every step; keep the scratch out of line

    void operator()(const std::vector<double>& xr, std::vector<double>& dxr, double t) const {
        Work& wk = *buffers;
        const int n = wk.n, w = wk.w;
        const auto* rho = reinterpret_cast<const cplx*>(xr.data());
        auto* out = reinterpret_cast<cplx*>(dxr.data());
        cplx* R = wk.pad.data() + 2 * w + 2;  // R[i*w + j] = ρ_ij, zero outside [0, n)
        for (int i = 0; i < n; ++i) {
            const cplx* row = rho + wk.off[static_cast<std::size_t>(i)] - i;
            for (int j = i; j < n; ++j) R[i * w + j] = row[j], R[j * w + i] = std::conj(row[j]);
        }

        const double W = 0.5 * mode->omega * mode->omega * mode->q * std::cos(mode->omega * t);
        const double hd = 0.25 * omega0 + 0.25 * W / omega0;
        const double ho = -0.25 * omega0 + 0.25 * W / omega0;
        const auto v = evaluate_mode(*mode, t);
        const cplx iu = cplx(0.0, 1.0) * v.u_dot / (2.0 * omega0);
        const cplx lm = 0.5 * v.u - iu;   // coefficient of a in C_S
        const cplx lp = -0.5 * v.u - iu;  // coefficient of a†
        const double g1 = gamma * (N + 1.0), g2 = gamma * N;
        const double P = g1 * std::norm(lm) + g2 * std::norm(lp);
        const double Q = g1 * std::norm(lp) + g2 * std::norm(lm);
        const cplx Gc = (g1 + g2) * lm * std::conj(lp);
        const cplx Gcb = std::conj(Gc);
        const cplx I(0.0, 1.0);
        // a² and a†² coefficients acting from the left (kl, kld) and right (kr, krd)
        const cplx kl = -I * ho - 0.5 * Gc, kld = -I * ho - 0.5 * Gcb;
        const cplx kr = I * ho - 0.5 * Gc, krd = I * ho - 0.5 * Gcb;
        const double* s1 = wk.s1.data() + 2;
        const double* s2 = wk.s2.data() + 2;

        for (int i = 0; i < n; ++i) {
            const cplx* r = R + i * w;
            const cplx* up1 = r + w;
            const cplx* up2 = r + 2 * w;
            const cplx* dn1 = r - w;
            const cplx* dn2 = r - 2 * w;
            const double si2 = s2[i + 2], si0 = s2[i], si1 = s1[i + 1], si = s1[i];
            cplx* o = out + wk.off[static_cast<std::size_t>(i)] - i;
            for (int j = i; j < n; ++j) {
                const cplx diag(-0.5 * (P * (i + j) + Q * (i + j + 2)), -2.0 * hd * (i - j));
                cplx d = diag * r[j];
                d += kl * si2 * up2[j] + kld * si0 * dn2[j];
                d += kr * s2[j] * r[j - 2] + krd * s2[j + 2] * r[j + 2];
                d += P * si1 * s1[j + 1] * up1[j + 1] + Q * si * s1[j] * dn1[j - 1];
                d += Gc * si1 * s1[j] * up1[j - 1] + Gcb * si * s1[j + 1] * dn1[j + 1];
                o[j] = d;
            }
        }
    }
};

cplx displacement_element(int m, int k, cplx alpha) {
    const double x = std::norm(alpha);
    const double pref = std::exp(-0.5 * x);
    if (m >= k) {
        const double f = std::exp(0.5 * (std::lgamma(k + 1.0) - std::lgamma(m + 1.0)));
        return f * std::pow(alpha, m - k) * pref * boost::math::laguerre(static_cast<unsigned>(k), static_cast<unsigned>(m - k), x);
    }
    const double f = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(k + 1.0)));
    return f * std::pow(-std::conj(alpha), k - m) * pref *
           boost::math::laguerre(static_cast<unsigned>(m), static_cast<unsigned>(k - m), x);
}

struct Moments {
    MomentState state;
    double purity;
};

Moments extract(const cplx* rho, int n, double ell) {
    cplx a1 = 0.0, a2 = 0.0;
    double nn = 0.0, pur = 0.0;
    for (int i = 0; i < n; ++i) {
        nn += i * rho[i * n + i].real();
        if (i + 1 < n) a1 += std::sqrt(i + 1.0) * rho[(i + 1) * n + i];
        if (i + 2 < n) a2 += std::sqrt((i + 1.0) * (i + 2.0)) * rho[(i + 2) * n + i];
        for (int j = 0; j < n; ++j) pur += std::norm(rho[i * n + j]);
    }
    const double pu = hbar / ell;
    MomentState::Raw raw{std::sqrt(2.0) * ell * a1.real(), std::sqrt(2.0) * pu * a1.imag(),
                         0.5 * ell * ell * (2.0 * a2.real() + 2.0 * nn + 1.0),
                         0.5 * pu * pu * (2.0 * nn + 1.0 - 2.0 * a2.real()), 2.0 * hbar * a2.imag()};
    return {MomentState::from_raw(raw), pur};
}

FockTrajectory run_fock(const FloquetMode& mode, const BathParams& bath, double N, const MomentState& s0, double m,
                        double t_end, double stride, int n_max, const FockOptions& opt) {
    const int n = n_max + 1;
    const double ell = std::sqrt(hbar / (m * mode.omega0));
    const double pu = hbar / ell;

    // Displaced thermal initial state.
    const double nbar = 0.5 * (2.0 * s0.var_x / (ell * ell) - 1.0);
    const double nbar_p = 0.5 * (2.0 * s0.var_p / (pu * pu) - 1.0);
    if (std::abs(nbar - nbar_p) > 1e-9 * (nbar + 1.0) || std::abs(s0.cov_sym) > 1e-9 * ell * pu || nbar < -1e-12)
        throw ValidationError("fock_oracle: initial state must be a displaced thermal state of the reference oscillator");
    const cplx alpha = cplx(s0.mean_x / ell, s0.mean_p / pu) / std::sqrt(2.0);
    const double nb = std::max(nbar, 0.0);

    std::vector<cplx> full(static_cast<std::size_t>(n * n));
    cplx* rho = full.data();
    const int k_max = n + 60;
    std::vector<cplx> col(static_cast<std::size_t>(n));
    for (int k = 0; k <= k_max; ++k) {
        const double pk = nb == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::pow(nb, k) / std::pow(nb + 1.0, k + 1);
        if (pk < 1e-300) continue;
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = displacement_element(i, k, alpha);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                rho[i * n + j] += pk * col[static_cast<std::size_t>(i)] * std::conj(col[static_cast<std::size_t>(j)]);
    }
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += rho[i * n + i].real();
    if (1.0 - tr > opt.tail_tol)
        throw NumericalError("fock_oracle: initial state tail weight exceeds tolerance; raise n_max", 1.0 - tr);

    Work work(n);
    std::vector<double> x(static_cast<std::size_t>(n * (n + 1)), 0.0);
    auto* packed = reinterpret_cast<cplx*>(x.data());
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) packed[work.off[static_cast<std::size_t>(i)] + j - i] = rho[i * n + j];

    FockSystem sys{&mode, mode.omega0, bath.gamma, N, &work};
    FockTrajectory out;
    out.n_max = n_max;
    auto sample = [&](double t, const std::vector<double>& s) {
        const auto* p = reinterpret_cast<const cplx*>(s.data());
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const cplx v = p[work.off[static_cast<std::size_t>(i)] + j - i];
                rho[i * n + j] = v, rho[j * n + i] = std::conj(v);
            }
        const auto mo = extract(rho, n, ell);
        out.samples.push_back({t, mo.state, mo.purity});
        out.edge_population =
            std::max(out.edge_population, rho[(n - 1) * n + n - 1].real() + rho[(n - 2) * n + n - 2].real());
        return true;
    };
    // Small bases are accuracy-limited, large ones stability-limited; the
    // low-order stepper is cheaper in the latter regime.
    namespace odeint = boost::numeric::odeint;
    if (n <= 64)
        out.stats = ode::integrate_sampled<odeint::runge_kutta_fehlberg78>(sys, x, 0.0, t_end, stride, opt.tol, sample);
    else
        out.stats = ode::integrate_sampled<odeint::runge_kutta_dopri5>(sys, x, 0.0, t_end, stride, opt.tol, sample);
    return out;
}

using Getter = double (*)(const MomentState&);
const Getter components[5] = {
    [](const MomentState& s) { return s.mean_x; }, [](const MomentState& s) { return s.mean_p; },
    [](const MomentState& s) { return s.var_x; },  [](const MomentState& s) { return s.var_p; },
    [](const MomentState& s) { return s.cov_sym; },
};

template <class SA, class SB>
double compare(const std::vector<SA>& a, const std::vector<SB>& b) {
    if (a.size() != b.size()) throw ValidationError("moment comparison: trajectories have different sample counts");
    double worst = 0.0;
    for (auto get : components) {
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (std::abs(a[i].t - b[i].t) > 1e-9 * std::max(1.0, std::abs(b[i].t)))
                throw ValidationError("moment comparison: sample times differ");
            scale = std::max(scale, std::abs(get(b[i].state)));
            diff = std::max(diff, std::abs(get(a[i].state) - get(b[i].state)));
        }
        if (scale > 0.0) worst = std::max(worst, diff / scale);
        else worst = std::max(worst, diff);
    }
    return worst;
}

}  // namespace

FockTrajectory fock_oracle(const FloquetMode& mode, double m, const BathParams& bath, const MomentState& state0,
                           double t_end, double stride, const FockOptions& options) {
    bath.validate();
    state0.validate();
    if (options.n_max < 16) throw ValidationError("fock_oracle: n_max must be >= 16");
    if (!(m > 0.0)) throw ValidationError("fock_oracle: mass must be > 0");
    if (!(mode.omega0 > 0.0)) throw ValidationError("untrapped mode: omega0 = 0");
    const double N = effective_occupation(mode, bath).N;

    if (options.n_max_limit < options.n_max) throw ValidationError("fock_oracle: n_max_limit must be >= n_max");
    int n = options.n_max;
    auto base = run_fock(mode, bath, N, state0, m, t_end, stride, n, options);
    base.n_max_start = options.n_max;
    if (!options.check_convergence) return base;
    std::vector<std::pair<int, double>> log;
    for (;;) {
        auto fine = run_fock(mode, bath, N, state0, m, t_end, stride, 2 * n, options);
        const double change = compare(base.samples, fine.samples);
        log.emplace_back(n, change);
        fine.n_max_start = options.n_max;
        fine.convergence = change;
        fine.doublings = log;
        if (change <= options.convergence_tol) return fine;
        if (4 * n > options.n_max_limit)
            throw NumericalError("fock_oracle: truncation not converged on doubling n_max to " + std::to_string(2 * n),
                                 change);
        n *= 2;
        base = std::move(fine);
    }
}

double relative_moment_error(const MomentTrajectory& a, const FockTrajectory& b) { return compare(a.samples, b.samples); }

}  // namespace sawtrap
