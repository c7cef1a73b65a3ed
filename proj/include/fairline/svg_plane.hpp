#pragma once

#include <span>
#include <string>
#include <vector>

#include "fairline/classic.hpp"
#include "fairline/regression.hpp"

namespace fairline {

/// Everything the b0-b1 plane drawing needs. Reference lines, derived from
/// d_f:
///   ideal line   b0 + b1 = 1
///   line AB      b0 + b1 = 1 - sqrt(2) * d_f   (unfair-side cutoff)
///   line CD      b0 + b1 = 0                   (hard floor)
///   axis         b1 = 0                        (traditional boundary)
/// plus the trivial-item marker at (1, 0).
struct PlotSpec {
    std::vector<ItemPoint> points;
    std::vector<RegionLabel> regions;  // one label per point
    double d_f = 0.0;

    double ab_offset() const;  // 1 - sqrt(2) * d_f
};

/// Styling is fixed so output bytes are stable for identical input.
namespace plot_style {
inline constexpr int width = 640;
inline constexpr int height = 480;
inline constexpr int margin_left = 60;
inline constexpr int margin_right = 20;
inline constexpr int margin_top = 20;
inline constexpr int margin_bottom = 45;
inline constexpr double point_radius = 4.0;
inline constexpr const char* fair_color = "#2e8b57";
inline constexpr const char* proposed_only_color = "#d9534f";
inline constexpr const char* both_color = "#8e44ad";
inline constexpr const char* traditional_only_color = "#e0a33d";
}  // namespace plot_style

/// Renders the plane as a standalone SVG document. The viewport always
/// covers every point plus (1, 0) and (0, 1). Item points become one
/// circle each with the item id in a <title>. Points below the floor
/// line are rejected: they cannot come out of a correct fit.
std::string render_plane(const PlotSpec& spec);

}  // namespace fairline
