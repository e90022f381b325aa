#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "medialkit/vec.hpp"

namespace medialkit {

enum class PlotKind { Scatter2d, Scatter3dProjected, LogLog };

std::string plot_kind_name(PlotKind k);
PlotKind plot_kind_from_name(const std::string& name);  // throws std::invalid_argument

struct PlotSeries {
    std::string label;
    std::vector<Vec> points;
    std::string color = "#1f6fb4";
};

// Deterministic scatter plot description. Scatter3dProjected uses a fixed
// orthographic camera (azimuth/elevation below, recorded in the SVG metadata);
// LogLog drops nonpositive coordinates.
struct PlotSpec {
    PlotKind kind = PlotKind::Scatter2d;
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    std::vector<PlotSeries> series;
    double azimuth_deg = 35.0;
    double elevation_deg = 25.0;
};

// Standalone SVG document. Series beyond 40k points are stride subsampled,
// coordinates are printed with %.6g, and empty series still produce a valid
// document; output stays far below 5 MB.
void emit_plot(const PlotSpec& spec, std::ostream& out);

}  // namespace medialkit
