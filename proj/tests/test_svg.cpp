#include <doctest.h>

#include <string>
#include <vector>

#include "ebikecast/error.hpp"
#include "ebikecast/svg.hpp"
#include "test_util.hpp"

using namespace ebikecast;
using testutil::TempDir;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

}  // namespace

TEST_CASE("emit_plot: single point renders a marker") {
    TempDir tmp;
    svg::emit_plot({{"pt", {1.0}, {2.0}}}, tmp.file("one.svg"));
    const auto content = testutil::read_file(tmp.file("one.svg"));
    CHECK(content.find("<svg") != std::string::npos);
    CHECK(content.find("<circle") != std::string::npos);
    CHECK(content.find("</svg>") != std::string::npos);
}

TEST_CASE("emit_plot: one polyline per series") {
    TempDir tmp;
    std::vector<svg::PlotSeries> series(100);
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (int i = 0; i < 12; ++i) {
            series[s].x.push_back(static_cast<double>(i));
            series[s].y.push_back(static_cast<double>(s) + 0.1 * i);
        }
    }
    svg::emit_plot(series, tmp.file("many.svg"));
    const auto content = testutil::read_file(tmp.file("many.svg"));
    CHECK(count_occurrences(content, "<polyline") == 100);
}

TEST_CASE("emit_plot: error paths") {
    TempDir tmp;
    CHECK_THROWS_AS(svg::emit_plot({}, tmp.file("n.svg")), Error);
    CHECK_THROWS_AS(svg::emit_plot({{"bad", {1.0, 2.0}, {1.0}}}, tmp.file("n.svg")), Error);
    CHECK_THROWS_AS(
        svg::emit_plot({{"x", {1.0}, {1.0}}}, tmp.path / "missing_dir" / "plot.svg"), Error);
}

TEST_CASE("emit_plot: byte-identical across runs") {
    TempDir tmp;
    const std::vector<svg::PlotSeries> series{{"a", {0, 1, 2}, {5.5, 3.25, 8.125}}};
    svg::PlotOptions options;
    options.title = "t";
    options.x_label = "x";
    options.y_label = "y";
    svg::emit_plot(series, tmp.file("a.svg"), options);
    svg::emit_plot(series, tmp.file("b.svg"), options);
    CHECK(testutil::read_file(tmp.file("a.svg")) == testutil::read_file(tmp.file("b.svg")));
}
