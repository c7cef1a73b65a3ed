#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairline/regression.hpp"
#include "fairline/score_matrix.hpp"

namespace fairline {

enum class CutoffRule { MadScaled, Fixed };

/// Controls how the fair-distance limit d_f is chosen each round.
///
/// MadScaled: d_f = max(cutoff_floor, mad_multiplier * 1.4826 * MAD of the
/// distances), the robust spread of a sample concentrated near zero.
/// Fixed: d_f = fixed_cutoff, for workflows where the limit is set a priori.
struct ConsensusConfig {
    CutoffRule cutoff_rule = CutoffRule::MadScaled;
    double mad_multiplier = 3.0;
    double cutoff_floor = 0.1;
    double fixed_cutoff = 0.2;
    // Rounds to run at most; defaults to the item count, the provable bound.
    std::optional<std::size_t> max_iterations;

    bool operator==(const ConsensusConfig&) const = default;
};

/// One elimination round: fits over the items that survived into the round,
/// the cutoff applied, and the ids removed (empty in the stopping round).
struct IterationRecord {
    std::vector<ItemPoint> item_points;
    double d_f = 0.0;
    std::vector<std::string> removed;

    bool operator==(const IterationRecord&) const = default;
};

/// Final score for one examinee over the fair items, at original weights.
struct Rescored {
    std::string examinee_id;
    double score = 0.0;
    double percent = 0.0;  // of the fair-item maximum

    bool operator==(const Rescored&) const = default;
};

struct AnalysisResult {
    std::vector<IterationRecord> iterations;
    std::vector<std::string> fair_items;
    std::vector<ItemPoint> unfair_items;  // point captured in its removal round
    std::vector<Rescored> rescored_totals;
    // Fits over the final fair set (used for the final plane and the
    // after-elimination diagnostic); equals the last round's points when the
    // loop stopped because nothing was removed.
    std::vector<ItemPoint> final_points;
    double final_d_f = 0.0;

    bool operator==(const AnalysisResult&) const = default;
};

/// Fair-distance limit for one round. Needs at least 3 distances; returns
/// a strictly positive value.
double find_cutoff(std::span<const double> distances, const ConsensusConfig& cfg);

/// Iterative elimination: fit all surviving items (totals recomputed over
/// the survivors each round), compute d_f, drop every item with d < -d_f,
/// repeat until a round removes nothing. Every round is recorded.
AnalysisResult detect_unfair(const NormalizedMatrix& m, const ConsensusConfig& cfg);

/// Sum of raw scores over the fair items per examinee, with the percentage
/// of the attainable fair-item maximum.
std::vector<Rescored> rescore(const ScoreMatrix& raw, std::span<const std::string> fair_items);

/// Sum of positive distances, the drift diagnostic reported before and
/// after elimination.
double sum_positive_distances(std::span<const ItemPoint> points);

}  // namespace fairline
