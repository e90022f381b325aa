#include "medialkit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace medialkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kWidth = 720;
constexpr int kHeight = 540;
constexpr int kMargin = 56;
constexpr std::size_t kMaxPointsPerSeries = 40000;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Plot-plane coordinates of one data point, or false when it does not map
// (wrong dimension, nonpositive on a log axis, non-finite).
bool plane_coords(const PlotSpec& spec, const Vec& p, double& u, double& v) {
    switch (spec.kind) {
        case PlotKind::Scatter2d:
            if (p.size() < 2) return false;
            u = p[0];
            v = p[1];
            break;
        case PlotKind::LogLog:
            if (p.size() < 2 || p[0] <= 0 || p[1] <= 0) return false;
            u = std::log10(p[0]);
            v = std::log10(p[1]);
            break;
        case PlotKind::Scatter3dProjected: {
            if (p.size() < 3) return false;
            const double az = spec.azimuth_deg * kPi / 180;
            const double el = spec.elevation_deg * kPi / 180;
            u = -std::sin(az) * p[0] + std::cos(az) * p[1];
            v = -std::sin(el) * std::cos(az) * p[0] - std::sin(el) * std::sin(az) * p[1] +
                std::cos(el) * p[2];
            break;
        }
    }
    return std::isfinite(u) && std::isfinite(v);
}

}  // namespace

std::string plot_kind_name(PlotKind k) {
    switch (k) {
        case PlotKind::Scatter2d: return "scatter2d";
        case PlotKind::LogLog: return "loglog";
        case PlotKind::Scatter3dProjected: return "scatter3d-projected";
    }
    return "scatter2d";
}

PlotKind plot_kind_from_name(const std::string& name) {
    if (name == "scatter2d") return PlotKind::Scatter2d;
    if (name == "loglog") return PlotKind::LogLog;
    if (name == "scatter3d-projected") return PlotKind::Scatter3dProjected;
    throw std::invalid_argument("unknown plot kind '" + name + "'");
}

void emit_plot(const PlotSpec& spec, std::ostream& out) {
    double lo_u = std::numeric_limits<double>::infinity(), hi_u = -lo_u;
    double lo_v = lo_u, hi_v = -lo_u;
    for (const PlotSeries& s : spec.series) {
        for (const Vec& p : s.points) {
            double u, v;
            if (!plane_coords(spec, p, u, v)) continue;
            lo_u = std::min(lo_u, u);
            hi_u = std::max(hi_u, u);
            lo_v = std::min(lo_v, v);
            hi_v = std::max(hi_v, v);
        }
    }
    if (!(lo_u <= hi_u)) {
        lo_u = 0;
        hi_u = 1;
        lo_v = 0;
        hi_v = 1;
    }
    if (hi_u - lo_u < 1e-12) {
        lo_u -= 0.5;
        hi_u += 0.5;
    }
    if (hi_v - lo_v < 1e-12) {
        lo_v -= 0.5;
        hi_v += 0.5;
    }
    const double pad_u = 0.04 * (hi_u - lo_u);
    const double pad_v = 0.04 * (hi_v - lo_v);
    lo_u -= pad_u;
    hi_u += pad_u;
    lo_v -= pad_v;
    hi_v += pad_v;

    auto px = [&](double u) {
        return kMargin + (u - lo_u) / (hi_u - lo_u) * (kWidth - 2 * kMargin);
    };
    auto py = [&](double v) {
        return kHeight - kMargin - (v - lo_v) / (hi_v - lo_v) * (kHeight - 2 * kMargin);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<metadata>kind=" << plot_kind_name(spec.kind);
    if (spec.kind == PlotKind::Scatter3dProjected)
        out << " camera=orthographic azimuth_deg=" << fmt(spec.azimuth_deg)
            << " elevation_deg=" << fmt(spec.elevation_deg);
    out << "</metadata>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
        << (kWidth - 2 * kMargin) << "\" height=\"" << (kHeight - 2 * kMargin)
        << "\" fill=\"none\" stroke=\"#404040\"/>\n";
    if (!spec.title.empty())
        out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kMargin - 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
            << escape(spec.title) << "</text>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(spec.x_label) << "</text>\n";
    out << "<text x=\"16\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 "
        << kHeight / 2 << ")\">" << escape(spec.y_label) << "</text>\n";

    // Corner range labels keep the document self-describing without a full
    // axis-tick layout.
    out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(lo_u) << "</text>\n";
    out << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(hi_u)
        << "</text>\n";
    out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(lo_v)
        << "</text>\n";
    out << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(hi_v)
        << "</text>\n";

    int legend_row = 0;
    for (const PlotSeries& s : spec.series) {
        std::size_t stride = 1;
        if (s.points.size() > kMaxPointsPerSeries)
            stride = (s.points.size() + kMaxPointsPerSeries - 1) / kMaxPointsPerSeries;
        out << "<g fill=\"" << escape(s.color) << "\" fill-opacity=\"0.8\">\n";
        for (std::size_t i = 0; i < s.points.size(); i += stride) {
            double u, v;
            if (!plane_coords(spec, s.points[i], u, v)) continue;
            out << "<circle cx=\"" << fmt(px(u)) << "\" cy=\"" << fmt(py(v)) << "\" r=\"2\"/>\n";
        }
        out << "</g>\n";
        if (!s.label.empty()) {
            int ly = kMargin + 14 + 16 * legend_row++;
            out << "<circle cx=\"" << kWidth - kMargin - 120 << "\" cy=\"" << ly - 4
                << "\" r=\"4\" fill=\"" << escape(s.color) << "\"/>\n";
            out << "<text x=\"" << kWidth - kMargin - 110 << "\" y=\"" << ly
                << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
                << "</text>\n";
        }
    }
    out << "</svg>\n";
}

}  // namespace medialkit
