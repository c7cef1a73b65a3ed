#include "fairline/consensus.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <unordered_set>

namespace fairline {

namespace {

// Consistency factor making the MAD estimate the standard deviation of a
// normal sample.
constexpr double mad_to_sigma = 1.4826;

double median_inplace(std::vector<double>& v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return lo + (hi - lo) / 2.0;
}

}  // namespace

double find_cutoff(std::span<const double> distances, const ConsensusConfig& cfg) {
    if (distances.size() < 3) {
        throw ValidationError("consensus needs at least 3 item distances, got " +
                              std::to_string(distances.size()));
    }
    if (!(cfg.cutoff_floor > 0.0)) throw ValidationError("cutoff_floor must be positive");
    if (!(cfg.mad_multiplier > 0.0)) throw ValidationError("mad_multiplier must be positive");

    if (cfg.cutoff_rule == CutoffRule::Fixed) {
        if (!(cfg.fixed_cutoff > 0.0)) throw ValidationError("fixed_cutoff must be positive");
        return cfg.fixed_cutoff;
    }

    std::vector<double> work(distances.begin(), distances.end());
    const double med = median_inplace(work);
    for (double& v : work) v = std::abs(v - med);
    const double mad = median_inplace(work);
    return std::max(cfg.cutoff_floor, cfg.mad_multiplier * mad_to_sigma * mad);
}

AnalysisResult detect_unfair(const NormalizedMatrix& m, const ConsensusConfig& cfg) {
    const Eigen::Index n = m.item_count();
    if (n < 3) throw ValidationError("detection needs at least 3 items");

    const std::size_t max_rounds =
        cfg.max_iterations.value_or(static_cast<std::size_t>(n));
    if (max_rounds == 0) throw ValidationError("max_iterations must be positive");

    std::vector<Eigen::Index> surviving(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < surviving.size(); ++i) surviving[i] = static_cast<Eigen::Index>(i);

    AnalysisResult result;
    while (result.iterations.size() < max_rounds) {
        const std::vector<ItemPoint> points = fit_all(m, surviving);
#ifndef NDEBUG
        for (const ItemPoint& p : points) {
            // Below the floor line b0 + b1 = 0 the fitted proportion at g = 1
            // would be negative; a point down there means the fit is broken.
            assert(p.d >= -(1.0 / std::numbers::sqrt2) - 1e-12);
        }
#endif

        std::vector<double> distances(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) distances[i] = points[i].d;
        const double d_f = find_cutoff(distances, cfg);

        IterationRecord round;
        round.item_points = points;
        round.d_f = d_f;

        std::vector<Eigen::Index> keep;
        keep.reserve(surviving.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].d < -d_f) {
                round.removed.push_back(points[i].item_id);
                result.unfair_items.push_back(points[i]);
            } else {
                keep.push_back(surviving[i]);
            }
        }

        const bool stopped = round.removed.empty();
        result.iterations.push_back(std::move(round));
        result.final_points = points;
        result.final_d_f = d_f;
        surviving = std::move(keep);

        if (stopped) break;
        // With fewer than 3 survivors no consensus can be formed; the
        // remainder stays fair and the final fit is refreshed below.
        if (surviving.size() < 3) break;
    }

    if (surviving.empty()) {
        throw ConsensusCollapseError("every item was removed; no fair set remains");
    }

    result.fair_items.reserve(surviving.size());
    for (const Eigen::Index i : surviving) {
        result.fair_items.push_back(m.raw.item_ids[static_cast<std::size_t>(i)]);
    }
    if (!result.iterations.back().removed.empty()) {
        // Loop stopped without a confirming round; refit the survivors so
        // final_points describes the fair set.
        result.final_points = fit_all(m, surviving);
    }
    result.rescored_totals = rescore(m.raw, result.fair_items);
    return result;
}

std::vector<Rescored> rescore(const ScoreMatrix& raw, std::span<const std::string> fair_items) {
    if (fair_items.empty()) throw ValidationError("fair item set is empty; nothing to rescore");

    std::unordered_set<std::string_view> fair(fair_items.begin(), fair_items.end());
    std::vector<Eigen::Index> cols;
    cols.reserve(fair_items.size());
    for (std::size_t i = 0; i < raw.item_ids.size(); ++i) {
        if (fair.contains(raw.item_ids[i])) cols.push_back(static_cast<Eigen::Index>(i));
    }
    if (cols.size() != fair_items.size()) {
        throw ValidationError("fair item set contains ids not present in the matrix");
    }

    double max_total = 0.0;
    for (const Eigen::Index c : cols) max_total += raw.max_scores(c);

    std::vector<Rescored> out;
    out.reserve(raw.examinee_ids.size());
    for (Eigen::Index r = 0; r < raw.scores.rows(); ++r) {
        double total = 0.0;
        for (const Eigen::Index c : cols) total += raw.scores(r, c);
        out.push_back({raw.examinee_ids[static_cast<std::size_t>(r)], total,
                       100.0 * total / max_total});
    }
    return out;
}

double sum_positive_distances(std::span<const ItemPoint> points) {
    double sum = 0.0;
    for (const ItemPoint& p : points) sum += std::max(p.d, 0.0);
    return sum;
}

}  // namespace fairline
