#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairline/classic.hpp"
#include "fairline/consensus.hpp"
#include "fairline/score_matrix.hpp"

namespace fairline {

/// unfair_items row of the JSON report.
struct UnfairRow {
    std::string id;
    double b0 = 0.0;
    double b1 = 0.0;
    double d = 0.0;

    bool operator==(const UnfairRow&) const = default;
};

/// classic[] row: first-pass item statistics with the combined-criteria
/// region, computed against the first round's cutoff.
struct ClassicRow {
    std::string id;
    std::optional<double> r;
    double p_value = 0.0;
    RegionLabel region = RegionLabel::Fair;

    bool operator==(const ClassicRow&) const = default;
};

/// The serializable analysis report. parse_report(serialize_report(r)) == r.
struct Report {
    ConsensusConfig config;
    std::vector<IterationRecord> iterations;
    std::vector<std::string> fair_items;
    std::vector<UnfairRow> unfair_items;
    std::vector<ClassicRow> classic;
    std::vector<Rescored> rescored;
    double sum_positive_distances_before = 0.0;
    double sum_positive_distances_after = 0.0;

    bool operator==(const Report&) const = default;
};

/// Packages a finished analysis with the classical statistics of the
/// original full matrix.
Report make_report(const NormalizedMatrix& m, const AnalysisResult& analysis,
                   const ConsensusConfig& cfg);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& doc);

std::string serialize_report(const Report& report);
Report parse_report(const std::string& text);

/// Plain-text rendering mirroring the JSON content.
std::string render_text(const Report& report);

/// Per-group distances for every item flagged unfair in at least one
/// group, plus the pooled all-groups row.
struct GroupCell {
    std::string item_id;
    double d = 0.0;
    bool flagged = false;

    bool operator==(const GroupCell&) const = default;
};

struct GroupComparison {
    std::vector<std::string> item_ids;     // union of flagged items, matrix order
    std::vector<std::string> group_labels; // input groups, then the pooled row
    std::vector<std::vector<GroupCell>> cells;  // [group][item]

    bool operator==(const GroupComparison&) const = default;
};

inline constexpr const char* pooled_group_label = "all groups";

/// Runs detection per group and on the pooled matrix. Groups must share
/// one item id set and carry distinct labels. Distances shown are the
/// first-round (full item set) fits, comparable across groups.
GroupComparison compare_groups(std::span<const std::pair<std::string, NormalizedMatrix>> groups,
                               const ConsensusConfig& cfg);

nlohmann::json comparison_to_json(const GroupComparison& cmp);
std::string render_comparison_text(const GroupComparison& cmp);

}  // namespace fairline
