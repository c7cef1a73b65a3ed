#include "fairline/classic.hpp"

#include <algorithm>
#include <cmath>

namespace fairline {

RegionLabel classify_region(const ItemPoint& point, std::optional<double> r, double d_f) {
    if (!(d_f > 0.0)) throw ValidationError("d_f must be positive");
    const bool proposed = point.d < -d_f;
    const bool traditional = r.has_value() && *r < 0.0;
    if (proposed && traditional) return RegionLabel::Both;
    if (proposed) return RegionLabel::ProposedOnly;
    if (traditional) return RegionLabel::TraditionalOnly;
    return RegionLabel::Fair;
}

const char* to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::Fair: return "fair";
        case RegionLabel::ProposedOnly: return "proposed_only";
        case RegionLabel::Both: return "both";
        case RegionLabel::TraditionalOnly: return "traditional_only";
    }
    return "fair";
}

const char* to_string(DifficultyBand band) {
    switch (band) {
        case DifficultyBand::TrivialEasy: return "trivial/easy";
        case DifficultyBand::Moderate: return "moderate";
        case DifficultyBand::Hard: return "hard";
    }
    return "moderate";
}

std::vector<DifficultyEntry> difficulty_profile(std::span<const ItemPoint> points,
                                                double easy_edge, double hard_edge) {
    if (points.empty()) throw ValidationError("difficulty profile needs at least one item");
    if (!(easy_edge < hard_edge)) throw ValidationError("band edges must be increasing");

    std::vector<DifficultyEntry> out;
    out.reserve(points.size());
    for (const ItemPoint& p : points) {
        DifficultyBand band = DifficultyBand::Moderate;
        if (p.b1 < easy_edge) band = DifficultyBand::TrivialEasy;
        else if (p.b1 >= hard_edge) band = DifficultyBand::Hard;
        out.push_back({p.item_id, p.b1, band});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const DifficultyEntry& a, const DifficultyEntry& b) { return a.b1 < b.b1; });
    return out;
}

std::vector<ItemClassicStats> classic_stats(const NormalizedMatrix& m) {
    const double k = static_cast<double>(m.examinee_count());
    const Eigen::VectorXd g_centered = m.totals.array() - m.totals.mean();
    const double s_g = std::sqrt(g_centered.dot(g_centered) / k);

    std::vector<ItemClassicStats> out;
    out.reserve(static_cast<std::size_t>(m.item_count()));
    for (Eigen::Index i = 0; i < m.item_count(); ++i) {
        const auto col = m.entries.col(i);
        ItemClassicStats s;
        s.item_id = m.raw.item_ids[static_cast<std::size_t>(i)];
        s.r = item_total_correlation(col, m.totals);
        s.p_value = col.mean();
        const Eigen::VectorXd x_centered = col.array() - s.p_value;
        s.s_p = std::sqrt(x_centered.dot(x_centered) / k);
        s.s_g = s_g;
        s.b1_difficulty = fit_item(col, m.totals).b1;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace fairline
