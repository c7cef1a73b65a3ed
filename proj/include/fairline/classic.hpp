#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairline/regression.hpp"
#include "fairline/score_matrix.hpp"

namespace fairline {

/// Classical per-item statistics. `r` is empty for constant columns:
/// a trivial item has no discrimination, which is different from zero.
struct ItemClassicStats {
    std::string item_id;
    std::optional<double> r;    // item-total product-moment correlation
    double p_value = 0.0;       // proportion of the maximum score attained
    double s_p = 0.0;           // item-score standard deviation
    double s_g = 0.0;           // total-score standard deviation
    double b1_difficulty = 0.0; // regression slope, satisfies b1 = r * s_p / s_g

    bool operator==(const ItemClassicStats&) const = default;
};

/// Where an item falls when the traditional criterion (r < 0) and the
/// distance criterion (d < -d_f) are applied together.
enum class RegionLabel { Fair, ProposedOnly, Both, TraditionalOnly };

enum class DifficultyBand { TrivialEasy, Moderate, Hard };

struct DifficultyEntry {
    std::string item_id;
    double b1 = 0.0;
    DifficultyBand band = DifficultyBand::Moderate;

    bool operator==(const DifficultyEntry&) const = default;
};

/// Pearson correlation of an item column with the totals. Returns an empty
/// optional when the item column is constant. Throws DegenerateCohortError
/// when the totals are constant.
template <typename DerivedX, typename DerivedG>
std::optional<double> item_total_correlation(const Eigen::MatrixBase<DerivedX>& item_column,
                                             const Eigen::MatrixBase<DerivedG>& totals) {
    const Eigen::Index k = totals.size();
    if (item_column.size() != k) throw ValidationError("item column and totals differ in length");
    if (k < 2) throw ValidationError("correlation needs at least 2 examinees");

    const Eigen::VectorXd g_centered = totals.derived().array() - totals.derived().mean();
    const Eigen::VectorXd x_centered = item_column.derived().array() - item_column.derived().mean();

    const double ss_g = g_centered.dot(g_centered);
    if (!(ss_g > degenerate_variance_floor * static_cast<double>(k))) {
        throw DegenerateCohortError("total scores have zero variance; correlation is undefined");
    }
    const double ss_x = x_centered.dot(x_centered);
    if (!(ss_x > degenerate_variance_floor * static_cast<double>(k))) {
        return std::nullopt;
    }
    return g_centered.dot(x_centered) / std::sqrt(ss_x * ss_g);
}

/// Applies both unfairness criteria to one item. Undefined r never counts
/// as traditional-unfair.
RegionLabel classify_region(const ItemPoint& point, std::optional<double> r, double d_f);

const char* to_string(RegionLabel label);
const char* to_string(DifficultyBand band);

/// Items sorted by ascending slope with a difficulty band each: slopes near
/// 0 belong to trivial/easy items, near 1 to moderate ones, and well above
/// 1 to hard ones.
std::vector<DifficultyEntry> difficulty_profile(std::span<const ItemPoint> points,
                                                double easy_edge = 0.5, double hard_edge = 1.5);

/// Classical statistics for every item of the matrix.
std::vector<ItemClassicStats> classic_stats(const NormalizedMatrix& m);

}  // namespace fairline
