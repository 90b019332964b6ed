#include "sawtrap/app/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "sawtrap/app/export.hpp"
#include "sawtrap/errors.hpp"

namespace sawtrap::app {

namespace {

constexpr double W = 640, H = 440, L = 80, R = 110, T = 40, B = 60;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

// Five-stop viridis approximation.
std::string colormap(double v) {
    static const std::array<std::array<double, 3>, 5> stops{{{68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    v = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0) * 4.0;
    const int i = std::min(static_cast<int>(v), 3);
    const double f = v - i;
    char buf[16];
    int rgb[3];
    for (int k = 0; k < 3; ++k) rgb[k] = static_cast<int>(std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
    return buf;
}

std::string header(const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(W) + "\" height=\"" + px(H) + "\" viewBox=\"0 0 " +
           px(W) + " " + px(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + "<text x=\"" + px(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(title) + "</text>\n";
}

std::string axis_labels(const std::string& xl, const std::string& yl) {
    return "<text x=\"" + px(L + (W - L - R) / 2) + "\" y=\"" + px(H - 18) + "\" text-anchor=\"middle\">" + escape(xl) +
           "</text>\n<text x=\"18\" y=\"" + px(T + (H - T - B) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           px(T + (H - T - B) / 2) + ")\">" + escape(yl) + "</text>\n";
}

}  // namespace

std::string heatmap_svg(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& z,
                        const std::string& x_label, const std::string& y_label, const std::string& title) {
    if (xs.empty() || ys.empty() || z.size() != xs.size() * ys.size())
        throw ValidationError("heatmap: grid and values disagree in size");
    const double pw = W - L - R, ph = H - T - B;
    const double cw = pw / static_cast<double>(xs.size()), ch = ph / static_cast<double>(ys.size());
    std::string s = header(title);
    for (std::size_t iy = 0; iy < ys.size(); ++iy)
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            const double x = L + cw * static_cast<double>(ix);
            const double y = T + ph - ch * static_cast<double>(iy + 1);
            s += "<rect class=\"cell\" x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(cw) + "\" height=\"" + px(ch) + "\" fill=\"" +
                 colormap(z[iy * xs.size() + ix]) + "\"/>\n";
        }
    s += "<rect x=\"" + px(L) + "\" y=\"" + px(T) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    // Ticks at cell centres, at most six per axis.
    const auto ticks = [](std::size_t n) {
        std::vector<std::size_t> out;
        const std::size_t step = std::max<std::size_t>(1, (n + 4) / 5);
        for (std::size_t i = 0; i < n; i += step) out.push_back(i);
        if (out.back() != n - 1) out.push_back(n - 1);
        return out;
    };
    for (auto i : ticks(xs.size()))
        s += "<text x=\"" + px(L + cw * (static_cast<double>(i) + 0.5)) + "\" y=\"" + px(T + ph + 16) +
             "\" text-anchor=\"middle\">" + num(xs[i]) + "</text>\n";
    for (auto i : ticks(ys.size()))
        s += "<text x=\"" + px(L - 6) + "\" y=\"" + px(T + ph - ch * (static_cast<double>(i) + 0.5) + 4) +
             "\" text-anchor=\"end\">" + num(ys[i]) + "</text>\n";
    // Colour bar.
    const double bx = W - R + 30;
    for (int k = 0; k < 50; ++k)
        s += "<rect x=\"" + px(bx) + "\" y=\"" + px(T + ph * (1.0 - (k + 1) / 50.0)) + "\" width=\"16\" height=\"" +
             px(ph / 50.0 + 0.5) + "\" fill=\"" + colormap((k + 0.5) / 50.0) + "\"/>\n";
    s += "<text x=\"" + px(bx + 22) + "\" y=\"" + px(T + 10) + "\">1</text>\n<text x=\"" + px(bx + 22) + "\" y=\"" +
         px(T + ph) + "\">0</text>\n";
    s += "<text x=\"" + px(bx + 8) + "\" y=\"" + px(T + ph + 30) + "\" text-anchor=\"middle\">stable</text>\n";
    s += axis_labels(x_label, y_label);
    return s + "</svg>\n";
}

std::string line_plot_svg(const std::vector<Series>& series, const std::string& x_label, const std::string& y_label,
                          const std::string& title) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& se : series) {
        if (se.x.size() != se.y.size()) throw ValidationError("line plot: x and y lengths differ");
        for (std::size_t i = 0; i < se.x.size(); ++i) {
            x0 = std::min(x0, se.x[i]), x1 = std::max(x1, se.x[i]);
            y0 = std::min(y0, se.y[i]), y1 = std::max(y1, se.y[i]);
        }
    }
    if (!(x1 >= x0)) throw ValidationError("line plot: no data");
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5 * std::max(1.0, std::abs(y0)), y1 += 0.5 * std::max(1.0, std::abs(y1));
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad, y1 += pad;
    const double pw = W - L - R, ph = H - T - B;
    const auto X = [&](double x) { return L + pw * (x - x0) / (x1 - x0); };
    const auto Y = [&](double y) { return T + ph * (1.0 - (y - y0) / (y1 - y0)); };

    std::string s = header(title);
    s += "<rect x=\"" + px(L) + "\" y=\"" + px(T) + "\" width=\"" + px(pw) + "\" height=\"" + px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        s += "<text x=\"" + px(X(xv)) + "\" y=\"" + px(T + ph + 16) + "\" text-anchor=\"middle\">" + num(xv) + "</text>\n";
        s += "<text x=\"" + px(L - 6) + "\" y=\"" + px(Y(yv) + 4) + "\" text-anchor=\"end\">" + num(yv) + "</text>\n";
    }
    int legend = 0;
    for (const auto& se : series) {
        // Decimate to about 4000 points per series to keep files small.
        const std::size_t step = std::max<std::size_t>(1, se.x.size() / 4000);
        std::string pts;
        for (std::size_t i = 0; i < se.x.size(); i += step) pts += px(X(se.x[i])) + "," + px(Y(se.y[i])) + " ";
        s += "<polyline fill=\"none\" stroke=\"" + se.color + "\" stroke-width=\"1.2\"" +
             (se.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + pts + "\"/>\n";
        if (!se.label.empty()) {
            const double ly = T + 14 + 16 * legend++;
            s += "<line x1=\"" + px(W - R + 8) + "\" y1=\"" + px(ly - 4) + "\" x2=\"" + px(W - R + 28) + "\" y2=\"" + px(ly - 4) +
                 "\" stroke=\"" + se.color + "\"" + (se.dashed ? " stroke-dasharray=\"6,4\"" : "") + "/>\n";
            s += "<text x=\"" + px(W - R + 32) + "\" y=\"" + px(ly) + "\">" + escape(se.label) + "</text>\n";
        }
    }
    s += axis_labels(x_label, y_label);
    return s + "</svg>\n";
}

PlotKind parse_plot_kind(const std::string& kind) {
    if (kind == "heatmap") return PlotKind::heatmap;
    if (kind == "trajectory") return PlotKind::trajectory;
    if (kind == "moments") return PlotKind::moments;
    throw ValidationError("plot.kind: expected heatmap, trajectory or moments, got '" + kind + "'");
}

namespace {

bool has(const CsvTable& t, const std::string& c) { return std::find(t.header.begin(), t.header.end(), c) != t.header.end(); }

void expect(const CsvTable& t, std::initializer_list<const char*> cols, const std::string& kind) {
    for (const char* c : cols)
        if (!has(t, c)) throw ValidationError("plot: dataset does not match kind '" + kind + "' (missing column '" + c + "')");
}

}  // namespace

void emit_plot(const std::filesystem::path& dataset, PlotKind kind, const std::filesystem::path& output,
               const std::filesystem::path& overlay) {
    const CsvTable t = read_csv(dataset);
    std::string svg;
    switch (kind) {
        case PlotKind::heatmap: {
            expect(t, {"q", "theta", "fraction_stable"}, "heatmap");
            std::vector<double> qs, th;
            for (double v : t.values("q"))
                if (std::find(qs.begin(), qs.end(), v) == qs.end()) qs.push_back(v);
            for (double v : t.values("theta"))
                if (std::find(th.begin(), th.end(), v) == th.end()) th.push_back(v);
            std::sort(qs.begin(), qs.end());
            std::sort(th.begin(), th.end());
            if (qs.size() * th.size() != t.rows.size()) throw ValidationError("plot: heatmap dataset is not a full grid");
            std::vector<double> z(t.rows.size(), 0.0);
            const auto cq = t.column("q"), ct = t.column("theta"), cf = t.column("fraction_stable");
            for (const auto& r : t.rows) {
                const auto iq = static_cast<std::size_t>(std::lower_bound(qs.begin(), qs.end(), r[cq]) - qs.begin());
                const auto it = static_cast<std::size_t>(std::lower_bound(th.begin(), th.end(), r[ct]) - th.begin());
                z[it * qs.size() + iq] = r[cf];
            }
            svg = heatmap_svg(qs, th, z, "q", "k_BT/E_S", "trapped fraction");
            break;
        }
        case PlotKind::trajectory: {
            std::vector<Series> series;
            if (has(t, "x_tilde")) {
                expect(t, {"tau", "x_tilde"}, "trajectory");
                series.push_back({t.values("tau"), t.values("x_tilde"), "#1f4e9c", false, "x~"});
                if (!overlay.empty()) {
                    const CsvTable o = read_csv(overlay);
                    expect(o, {"tau", "x_tilde"}, "trajectory");
                    series.push_back({o.values("tau"), o.values("x_tilde"), "#d62728", true, "overlay"});
                }
                svg = line_plot_svg(series, "τ", "x~ = kx", "trajectory");
            } else {
                expect(t, {"tau", "mean_x"}, "trajectory");
                series.push_back({t.values("tau"), t.values("mean_x"), "#1f4e9c", false, "<x>"});
                if (!overlay.empty()) {
                    const CsvTable o = read_csv(overlay);
                    expect(o, {"tau", "mean_x"}, "trajectory");
                    series.push_back({o.values("tau"), o.values("mean_x"), "#d62728", true, "reference"});
                }
                svg = line_plot_svg(series, "τ", "<x> [nm]", "first moment");
            }
            break;
        }
        case PlotKind::moments: {
            expect(t, {"tau", "var_x", "var_p", "cov_sym"}, "moments");
            svg = line_plot_svg({{t.values("tau"), t.values("var_x"), "#1f4e9c", false, "var x"}}, "τ", "var x [nm²]",
                                "position variance");
            break;
        }
    }
    write_text(output, svg);
}

}  // namespace sawtrap::app
