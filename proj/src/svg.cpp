#include "ebikecast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ebikecast/error.hpp"

namespace ebikecast::svg {

namespace {

// Muted qualitative palette, cycled across series.
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

void emit_plot(const std::vector<PlotSeries>& series, const std::filesystem::path& path,
               const PlotOptions& options) {
    if (series.empty()) throw Error(errc::precondition, "no series to plot");

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_min = x_min;
    double y_max = -x_min;
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size()) {
            throw Error(errc::precondition, "series x/y lengths differ");
        }
        if (s.x.empty()) throw Error(errc::precondition, "empty series in plot");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    if (x_min == x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_min == y_max) {
        y_min -= 0.5;
        y_max += 0.5;
    }

    const double margin_left = 70.0;
    const double margin_right = 20.0;
    const double margin_top = options.title.empty() ? 20.0 : 40.0;
    const double margin_bottom = 50.0;
    const double plot_w = options.width - margin_left - margin_right;
    const double plot_h = options.height - margin_top - margin_bottom;
    auto sx = [&](double v) { return margin_left + (v - x_min) / (x_max - x_min) * plot_w; };
    auto sy = [&](double v) {
        return margin_top + plot_h - (v - y_min) / (y_max - y_min) * plot_h;
    };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width
        << "\" height=\"" << options.height << "\" viewBox=\"0 0 " << options.width << ' '
        << options.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty()) {
        out << "<text x=\"" << options.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"16\">"
            << escape(options.title) << "</text>\n";
    }

    // Axes with 5 ticks per dimension.
    out << "<g stroke=\"black\" fill=\"none\">\n";
    out << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(margin_top + plot_h)
        << "\" x2=\"" << fmt(margin_left + plot_w) << "\" y2=\"" << fmt(margin_top + plot_h)
        << "\"/>\n";
    out << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(margin_top) << "\" x2=\""
        << fmt(margin_left) << "\" y2=\"" << fmt(margin_top + plot_h) << "\"/>\n";
    out << "</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"black\">\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_min + (x_max - x_min) * t / 4.0;
        const double fy = y_min + (y_max - y_min) * t / 4.0;
        out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << fmt(margin_top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << fmt_tick(fx) << "</text>\n";
        out << "<text x=\"" << fmt(margin_left - 8) << "\" y=\"" << fmt(sy(fy) + 4)
            << "\" text-anchor=\"end\">" << fmt_tick(fy) << "</text>\n";
    }
    if (!options.x_label.empty()) {
        out << "<text x=\"" << fmt(margin_left + plot_w / 2) << "\" y=\""
            << fmt(margin_top + plot_h + 38) << "\" text-anchor=\"middle\">"
            << escape(options.x_label) << "</text>\n";
    }
    if (!options.y_label.empty()) {
        out << "<text x=\"14\" y=\"" << fmt(margin_top + plot_h / 2)
            << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
            << fmt(margin_top + plot_h / 2) << ")\">" << escape(options.y_label) << "</text>\n";
    }
    out << "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        const PlotSeries& ps = series[s];
        if (ps.x.size() == 1) {
            out << "<circle cx=\"" << fmt(sx(ps.x[0])) << "\" cy=\"" << fmt(sy(ps.y[0]))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
            continue;
        }
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < ps.x.size(); ++i) {
            if (i > 0) out << ' ';
            out << fmt(sx(ps.x[i])) << ',' << fmt(sy(ps.y[i]));
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << out.str())) {
        throw Error(errc::io_write, "cannot write " + path.string());
    }
}

}  // namespace ebikecast::svg
