#include <algorithm>
#include <cmath>
#include <random>

#include "sawtrap/classical.hpp"
#include "sawtrap/parallel.hpp"

namespace sawtrap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void check_grid(const std::vector<double>& g, const char* name, bool nonnegative) {
    if (g.empty()) throw ValidationError(std::string("stability_diagram: ") + name + " is empty");
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!std::isfinite(g[i])) throw ValidationError(std::string("stability_diagram: ") + name + " has non-finite entries");
        if (nonnegative && g[i] < 0.0) throw ValidationError(std::string("stability_diagram: ") + name + " must be >= 0");
        if (i > 0 && !(g[i] > g[i - 1]))
            throw ValidationError(std::string("stability_diagram: ") + name + " must be strictly increasing");
    }
}

DiagramCell evaluate_cell(double q, double theta, const DriveConfig& drive, const DiagramOptions& opt,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double v_scale = std::sqrt(2.0 * theta);
    const double x0 = theta == 0.0 ? opt.probe_displacement : 0.0;

    int trapped = 0;
    std::vector<double> excursion;
    excursion.reserve(static_cast<std::size_t>(opt.samples_per_cell));
    for (int s = 0; s < opt.samples_per_cell; ++s) {
        const double v0 = opt.samples_per_cell == 1 ? v_scale : v_scale * std::abs(normal(rng));
        const auto verdict = classify_trajectory(q, x0, v0, drive, opt.tau_max, opt.criterion);
        if (verdict.stable) ++trapped;
        excursion.push_back(verdict.max_excursion);
    }

    DiagramCell cell;
    cell.fraction_stable = static_cast<double>(trapped) / opt.samples_per_cell;
    std::sort(excursion.begin(), excursion.end());
    const std::size_t n = excursion.size();
    cell.max_excursion_median = n % 2 == 1 ? excursion[n / 2] : 0.5 * (excursion[n / 2 - 1] + excursion[n / 2]);
    cell.stable = cell.fraction_stable >= trapped_fraction_threshold();
    return cell;
}

StabilityDiagram run_diagram(const std::vector<double>& q_grid, const std::vector<double>& temp_grid,
                             const DriveConfig& drive, const DiagramOptions& opt, bool parallel) {
    drive.validate();
    check_grid(q_grid, "q_grid", false);
    check_grid(temp_grid, "temp_grid", true);
    if (opt.samples_per_cell < 1) throw ValidationError("stability_diagram: samples_per_cell must be >= 1");
    if (!(opt.tau_max > 0.0)) throw ValidationError("stability_diagram: tau_max must be > 0");

    StabilityDiagram d;
    d.q_grid = q_grid;
    d.temp_grid = temp_grid;
    d.options = opt;
    const std::size_t nq = q_grid.size();
    const long total = static_cast<long>(nq * temp_grid.size());
    d.cells.resize(static_cast<std::size_t>(total));

    ExceptionSlot failure;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (long c = 0; c < total; ++c) {
        failure.capture([&] {
            const auto idx = static_cast<std::size_t>(c);
            d.cells[idx] = evaluate_cell(q_grid[idx % nq], temp_grid[idx / nq], drive, opt, cell_seed(opt.seed, idx));
        });
    }
    failure.rethrow();
    return d;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t seed, std::size_t cell_index) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(cell_index)));
}

StabilityDiagram stability_diagram(const std::vector<double>& q_grid, const std::vector<double>& temp_grid,
                                   const DriveConfig& drive, const DiagramOptions& options) {
    return run_diagram(q_grid, temp_grid, drive, options, true);
}

StabilityDiagram stability_diagram_serial(const std::vector<double>& q_grid, const std::vector<double>& temp_grid,
                                          const DriveConfig& drive, const DiagramOptions& options) {
    return run_diagram(q_grid, temp_grid, drive, options, false);
}

double lobe_max_theta(const StabilityDiagram& diagram, double q_min, double q_max) {
    double best = 0.0;
    for (std::size_t it = 0; it < diagram.temp_grid.size(); ++it)
        for (std::size_t iq = 0; iq < diagram.q_grid.size(); ++iq) {
            const double q = diagram.q_grid[iq];
            if (q < q_min || q > q_max) continue;
            if (diagram.at(iq, it).stable) best = std::max(best, diagram.temp_grid[it]);
        }
    return best;
}

}  // namespace sawtrap
