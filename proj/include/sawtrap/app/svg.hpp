#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sawtrap::app {

struct Series {
    std::vector<double> x, y;
    std::string color = "#1f4e9c";
    bool dashed = false;
    std::string label;
};

/// z is row-major over (y, x): z[iy * xs.size() + ix], values in [0, 1].
std::string heatmap_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& z,
                        const std::string& x_label, const std::string& y_label, const std::string& title);

std::string line_plot_svg(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                          const std::string& title);

enum class PlotKind { heatmap, trajectory, moments };

PlotKind parse_plot_kind(const std::string& kind);

/// Reads `dataset` (CSV written by this tool), checks that its columns fit
/// `kind` and writes a self-contained SVG. `overlay` is optional and drawn
/// dashed (trajectory only).
void emit_plot(const std::filesystem::path& dataset, PlotKind kind, const std::filesystem::path& output,
               const std::filesystem::path& overlay = {});

}  // namespace sawtrap::app
