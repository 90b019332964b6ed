// Serial reference vs OpenMP kernels for the two sweeps.
#include <chrono>
#include <cstdio>
#include <omp.h>

#include "sawtrap/classical.hpp"
#include "sawtrap/hill_floquet.hpp"

using namespace sawtrap;

template <class F>
static double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

static std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

int main() {
    const auto drive = DriveConfig::monochromatic_drive(1.0, 0.0);
    const auto qg = linspace(0.05, 0.9, 12);
    const auto tg = linspace(0.0, 0.05, 8);
    DiagramOptions opt;
    opt.tau_max = 100.0 * units::pi;
    opt.samples_per_cell = 4;

    std::printf("threads: %d\n", omp_get_max_threads());
    StabilityDiagram a, b;
    const double ts = seconds([&] { a = stability_diagram_serial(qg, tg, drive, opt); });
    const double tp = seconds([&] { b = stability_diagram(qg, tg, drive, opt); });
    bool same = true;
    for (std::size_t i = 0; i < a.cells.size(); ++i)
        same = same && a.cells[i].fraction_stable == b.cells[i].fraction_stable;
    std::printf("stability_diagram  %3zu cells  serial %.3f s  openmp %.3f s  identical %s\n", a.cells.size(), ts, tp,
                same ? "yes" : "no");

    std::vector<StableWindow> wa, wb;
    const double bs = seconds([&] { wa = stability_boundaries_serial(0.0, 8.0, drive); });
    const double bp = seconds([&] { wb = stability_boundaries(0.0, 8.0, drive); });
    bool wsame = wa.size() == wb.size();
    for (std::size_t i = 0; wsame && i < wa.size(); ++i) wsame = wa[i].q_lo == wb[i].q_lo && wa[i].q_hi == wb[i].q_hi;
    std::printf("stability_boundaries  %zu windows  serial %.3f s  openmp %.3f s  identical %s\n", wa.size(), bs, bp,
                wsame ? "yes" : "no");
    return same && wsame ? 0 : 1;
}
