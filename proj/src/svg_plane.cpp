#include "fairline/svg_plane.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

namespace fairline {

double PlotSpec::ab_offset() const { return 1.0 - std::numbers::sqrt2 * d_f; }

namespace {

using namespace plot_style;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

const char* region_color(RegionLabel label) {
    switch (label) {
        case RegionLabel::Fair: return fair_color;
        case RegionLabel::ProposedOnly: return proposed_only_color;
        case RegionLabel::Both: return both_color;
        case RegionLabel::TraditionalOnly: return traditional_only_color;
    }
    return fair_color;
}

struct Frame {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return margin_left + (x - x_min) / (x_max - x_min) * (width - margin_left - margin_right);
    }
    double py(double y) const {
        // SVG y grows downward.
        return margin_top + (y_max - y) / (y_max - y_min) * (height - margin_top - margin_bottom);
    }
};

// Visible segment of the anti-diagonal x + y = c, if any.
std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>>
clip_antidiagonal(double c, const Frame& f) {
    std::vector<std::pair<double, double>> hits;
    auto push = [&](double x, double y) {
        const double eps = 1e-9;
        if (x >= f.x_min - eps && x <= f.x_max + eps && y >= f.y_min - eps && y <= f.y_max + eps) {
            for (const auto& h : hits) {
                if (std::abs(h.first - x) < 1e-9 && std::abs(h.second - y) < 1e-9) return;
            }
            hits.emplace_back(x, y);
        }
    };
    push(f.x_min, c - f.x_min);
    push(f.x_max, c - f.x_max);
    push(c - f.y_min, f.y_min);
    push(c - f.y_max, f.y_max);
    if (hits.size() < 2) return std::nullopt;
    return std::make_pair(hits.front(), hits.back());
}

void line(std::string& svg, const Frame& f, double x1, double y1, double x2, double y2,
          const char* stroke, const char* extra) {
    svg += "  <line x1=\"" + num(f.px(x1)) + "\" y1=\"" + num(f.py(y1)) + "\" x2=\"" +
           num(f.px(x2)) + "\" y2=\"" + num(f.py(y2)) + "\" stroke=\"" + stroke + "\"" + extra +
           "/>\n";
}

void antidiagonal(std::string& svg, const Frame& f, double c, const char* stroke,
                  const char* extra, const char* label) {
    const auto seg = clip_antidiagonal(c, f);
    if (!seg) return;
    line(svg, f, seg->first.first, seg->first.second, seg->second.first, seg->second.second,
         stroke, extra);
    if (label && *label) {
        svg += "  <text x=\"" + num(f.px(seg->second.first) - 4.0) + "\" y=\"" +
               num(f.py(seg->second.second) - 6.0) +
               "\" font-size=\"11\" fill=\"#555\" text-anchor=\"end\">" + label + "</text>\n";
    }
}

}  // namespace

std::string render_plane(const PlotSpec& spec) {
    if (spec.points.empty()) throw ValidationError("plot needs at least one point");
    if (spec.regions.size() != spec.points.size())
        throw ValidationError("one region label per point required");
    if (!(spec.d_f > 0.0)) throw ValidationError("d_f must be positive");
    for (const ItemPoint& p : spec.points) {
        if (p.b0 + p.b1 < -1e-12) {
            throw ValidationError("item '" + p.item_id +
                                  "' lies below the floor line b0 + b1 = 0; such a point cannot "
                                  "come out of a correct fit");
        }
    }

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    for (const ItemPoint& p : spec.points) {
        x_min = std::min(x_min, p.b0);
        x_max = std::max(x_max, p.b0);
        y_min = std::min(y_min, p.b1);
        y_max = std::max(y_max, p.b1);
    }
    const double x_pad = 0.15 * std::max(x_max - x_min, 0.2);
    const double y_pad = 0.15 * std::max(y_max - y_min, 0.2);
    const Frame f{x_min - x_pad, x_max + x_pad, y_min - y_pad, y_max + y_pad};

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
           " " + std::to_string(height) + "\">\n";
    svg += "  <rect x=\"" + num(margin_left) + "\" y=\"" + num(margin_top) + "\" width=\"" +
           num(width - margin_left - margin_right) + "\" height=\"" +
           num(height - margin_top - margin_bottom) +
           "\" fill=\"#ffffff\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // Axis tick labels, five per axis.
    for (int t = 0; t <= 4; ++t) {
        const double x = f.x_min + (f.x_max - f.x_min) * t / 4.0;
        const double y = f.y_min + (f.y_max - f.y_min) * t / 4.0;
        svg += "  <text x=\"" + num(f.px(x)) + "\" y=\"" + num(height - margin_bottom + 16.0) +
               "\" font-size=\"11\" fill=\"#333\" text-anchor=\"middle\">" + num(x) + "</text>\n";
        svg += "  <text x=\"" + num(margin_left - 8.0) + "\" y=\"" + num(f.py(y) + 4.0) +
               "\" font-size=\"11\" fill=\"#333\" text-anchor=\"end\">" + num(y) + "</text>\n";
    }
    svg += "  <text x=\"" + num((margin_left + width - margin_right) / 2.0) + "\" y=\"" +
           num(height - 8.0) +
           "\" font-size=\"13\" fill=\"#000\" text-anchor=\"middle\">b0</text>\n";
    svg += "  <text x=\"16.00\" y=\"" + num((margin_top + height - margin_bottom) / 2.0) +
           "\" font-size=\"13\" fill=\"#000\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           num((margin_top + height - margin_bottom) / 2.0) + ")\">b1</text>\n";

    // b1 = 0 axis: the traditional r < 0 boundary.
    if (f.y_min < 0.0 && f.y_max > 0.0) {
        line(svg, f, f.x_min, 0.0, f.x_max, 0.0, "#888888",
             " stroke-width=\"1\" stroke-dasharray=\"2,3\"");
    }
    antidiagonal(svg, f, 0.0, "#888888", " stroke-width=\"1\"", "CD");
    antidiagonal(svg, f, spec.ab_offset(), "#c0392b",
                 " stroke-width=\"1\" stroke-dasharray=\"6,3\"", "AB");
    antidiagonal(svg, f, 1.0, "#333333", " stroke-width=\"1.5\"", "ideal");

    // Trivial-item marker at (1, 0).
    svg += "  <circle class=\"marker\" cx=\"" + num(f.px(1.0)) + "\" cy=\"" + num(f.py(0.0)) +
           "\" r=\"" + num(point_radius + 2.0) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    for (std::size_t i = 0; i < spec.points.size(); ++i) {
        const ItemPoint& p = spec.points[i];
        svg += "  <circle class=\"item\" cx=\"" + num(f.px(p.b0)) + "\" cy=\"" + num(f.py(p.b1)) +
               "\" r=\"" + num(point_radius) + "\" fill=\"" + region_color(spec.regions[i]) +
               "\" fill-opacity=\"0.85\"><title>" + xml_escape(p.item_id) + "</title></circle>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace fairline
