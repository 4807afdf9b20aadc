#pragma once

// Static SVG line plots. Dependency-free and byte-deterministic so output
// files can be diffed across runs.

#include <filesystem>
#include <string>
#include <vector>

namespace ebikecast::svg {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // same length as x
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 900;
    int height = 540;
};

/// One polyline per series (a single point renders as a marker), with axes
/// and tick labels. Throws on an empty series set or an unwritable path.
void emit_plot(const std::vector<PlotSeries>& series, const std::filesystem::path& path,
               const PlotOptions& options = {});

}  // namespace ebikecast::svg
