#include "fairline/report.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

namespace fairline {

namespace {

using nlohmann::json;

std::string fmt(double v, const char* spec = "%.4f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

const char* rule_name(CutoffRule rule) {
    return rule == CutoffRule::MadScaled ? "mad_scaled" : "fixed";
}

CutoffRule rule_from_name(const std::string& name) {
    if (name == "mad_scaled") return CutoffRule::MadScaled;
    if (name == "fixed") return CutoffRule::Fixed;
    throw ParseError("unknown cutoff rule '" + name + "'");
}

RegionLabel region_from_name(const std::string& name) {
    if (name == "fair") return RegionLabel::Fair;
    if (name == "proposed_only") return RegionLabel::ProposedOnly;
    if (name == "both") return RegionLabel::Both;
    if (name == "traditional_only") return RegionLabel::TraditionalOnly;
    throw ParseError("unknown region label '" + name + "'");
}

json point_to_json(const ItemPoint& p) {
    return {{"id", p.item_id},
            {"b0", p.b0},
            {"b1", p.b1},
            {"d", p.d},
            {"mean_score", p.mean_item_score},
            {"residual_variance", p.residual_variance},
            {"n_examinees", p.n_examinees}};
}

ItemPoint point_from_json(const json& j) {
    ItemPoint p;
    p.item_id = j.at("id").get<std::string>();
    p.b0 = j.at("b0").get<double>();
    p.b1 = j.at("b1").get<double>();
    p.d = j.at("d").get<double>();
    p.mean_item_score = j.at("mean_score").get<double>();
    p.residual_variance = j.at("residual_variance").get<double>();
    p.n_examinees = j.at("n_examinees").get<Eigen::Index>();
    return p;
}

}  // namespace

Report make_report(const NormalizedMatrix& m, const AnalysisResult& analysis,
                   const ConsensusConfig& cfg) {
    Report report;
    report.config = cfg;
    report.iterations = analysis.iterations;
    report.fair_items = analysis.fair_items;
    for (const ItemPoint& p : analysis.unfair_items) {
        report.unfair_items.push_back({p.item_id, p.b0, p.b1, p.d});
    }

    const auto& first = analysis.iterations.front();
    std::unordered_map<std::string_view, const ItemPoint*> first_points;
    for (const ItemPoint& p : first.item_points) first_points.emplace(p.item_id, &p);

    const std::vector<ItemClassicStats> stats = classic_stats(m);
    for (const ItemClassicStats& s : stats) {
        ClassicRow row;
        row.id = s.item_id;
        row.r = s.r;
        row.p_value = s.p_value;
        row.region = classify_region(*first_points.at(s.item_id), s.r, first.d_f);
        report.classic.push_back(std::move(row));
    }

    report.rescored = analysis.rescored_totals;
    report.sum_positive_distances_before = sum_positive_distances(first.item_points);
    report.sum_positive_distances_after = sum_positive_distances(analysis.final_points);
    return report;
}

nlohmann::json report_to_json(const Report& report) {
    json doc;
    doc["config"] = {{"cutoff_rule", rule_name(report.config.cutoff_rule)},
                     {"mad_multiplier", report.config.mad_multiplier},
                     {"cutoff_floor", report.config.cutoff_floor},
                     {"fixed_cutoff", report.config.fixed_cutoff},
                     {"max_iterations", report.config.max_iterations
                                            ? json(*report.config.max_iterations)
                                            : json(nullptr)}};

    doc["iterations"] = json::array();
    for (const IterationRecord& round : report.iterations) {
        json points = json::array();
        for (const ItemPoint& p : round.item_points) points.push_back(point_to_json(p));
        doc["iterations"].push_back(
            {{"d_f", round.d_f}, {"removed", round.removed}, {"item_points", std::move(points)}});
    }

    doc["fair_items"] = report.fair_items;
    doc["unfair_items"] = json::array();
    for (const UnfairRow& row : report.unfair_items) {
        doc["unfair_items"].push_back(
            {{"id", row.id}, {"b0", row.b0}, {"b1", row.b1}, {"d", row.d}});
    }
    doc["classic"] = json::array();
    for (const ClassicRow& row : report.classic) {
        doc["classic"].push_back({{"id", row.id},
                                  {"r", row.r ? json(*row.r) : json(nullptr)},
                                  {"p_value", row.p_value},
                                  {"region", to_string(row.region)}});
    }
    doc["rescored"] = json::array();
    for (const Rescored& row : report.rescored) {
        doc["rescored"].push_back(
            {{"id", row.examinee_id}, {"score", row.score}, {"percent", row.percent}});
    }
    doc["sum_positive_distances_before"] = report.sum_positive_distances_before;
    doc["sum_positive_distances_after"] = report.sum_positive_distances_after;
    return doc;
}

Report report_from_json(const nlohmann::json& doc) {
    Report report;
    const json& cfg = doc.at("config");
    report.config.cutoff_rule = rule_from_name(cfg.at("cutoff_rule").get<std::string>());
    report.config.mad_multiplier = cfg.at("mad_multiplier").get<double>();
    report.config.cutoff_floor = cfg.at("cutoff_floor").get<double>();
    report.config.fixed_cutoff = cfg.at("fixed_cutoff").get<double>();
    if (!cfg.at("max_iterations").is_null()) {
        report.config.max_iterations = cfg.at("max_iterations").get<std::size_t>();
    }

    for (const json& jround : doc.at("iterations")) {
        IterationRecord round;
        round.d_f = jround.at("d_f").get<double>();
        round.removed = jround.at("removed").get<std::vector<std::string>>();
        for (const json& jp : jround.at("item_points")) round.item_points.push_back(point_from_json(jp));
        report.iterations.push_back(std::move(round));
    }

    report.fair_items = doc.at("fair_items").get<std::vector<std::string>>();
    for (const json& j : doc.at("unfair_items")) {
        report.unfair_items.push_back({j.at("id").get<std::string>(), j.at("b0").get<double>(),
                                       j.at("b1").get<double>(), j.at("d").get<double>()});
    }
    for (const json& j : doc.at("classic")) {
        ClassicRow row;
        row.id = j.at("id").get<std::string>();
        if (!j.at("r").is_null()) row.r = j.at("r").get<double>();
        row.p_value = j.at("p_value").get<double>();
        row.region = region_from_name(j.at("region").get<std::string>());
        report.classic.push_back(std::move(row));
    }
    for (const json& j : doc.at("rescored")) {
        report.rescored.push_back({j.at("id").get<std::string>(), j.at("score").get<double>(),
                                   j.at("percent").get<double>()});
    }
    report.sum_positive_distances_before = doc.at("sum_positive_distances_before").get<double>();
    report.sum_positive_distances_after = doc.at("sum_positive_distances_after").get<double>();
    return report;
}

std::string serialize_report(const Report& report) { return report_to_json(report).dump(2) + "\n"; }

Report parse_report(const std::string& text) {
    try {
        return report_from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw ParseError(std::string("report is not valid JSON: ") + e.what());
    }
}

std::string render_text(const Report& report) {
    std::string out;
    out += "item fairness analysis\n";
    out += "======================\n\n";
    out += "cutoff rule: ";
    out += rule_name(report.config.cutoff_rule);
    if (report.config.cutoff_rule == CutoffRule::MadScaled) {
        out += " (multiplier " + fmt(report.config.mad_multiplier, "%g") + ", floor " +
               fmt(report.config.cutoff_floor, "%g") + ")";
    } else {
        out += " (d_f = " + fmt(report.config.fixed_cutoff, "%g") + ")";
    }
    out += "\n\n";

    for (std::size_t i = 0; i < report.iterations.size(); ++i) {
        const IterationRecord& round = report.iterations[i];
        out += "iteration " + std::to_string(i + 1) + ": " +
               std::to_string(round.item_points.size()) + " items, d_f = " + fmt(round.d_f);
        if (round.removed.empty()) {
            out += ", removed: (none)\n";
        } else {
            out += ", removed:";
            for (const std::string& id : round.removed) out += " " + id;
            out += "\n";
        }
    }
    out += "\n";

    if (report.unfair_items.empty()) {
        out += "unfair items: none\n";
    } else {
        out += "unfair items (" + std::to_string(report.unfair_items.size()) + "):\n";
        for (const UnfairRow& row : report.unfair_items) {
            out += "  " + row.id + "  b0 = " + fmt(row.b0) + "  b1 = " + fmt(row.b1) +
                   "  d = " + fmt(row.d) + "\n";
        }
    }
    out += "fair items (" + std::to_string(report.fair_items.size()) + "):";
    for (const std::string& id : report.fair_items) out += " " + id;
    out += "\n\n";
    out += "sum of positive distances: before " + fmt(report.sum_positive_distances_before) +
           ", after " + fmt(report.sum_positive_distances_after) + "\n\n";

    out += "classical statistics:\n";
    out += "  item          r    p_value  region\n";
    for (const ClassicRow& row : report.classic) {
        std::string id = row.id;
        if (id.size() < 8) id.append(8 - id.size(), ' ');
        out += "  " + id + "  " + (row.r ? fmt(*row.r, "%7.4f") : std::string("      -")) + "  " +
               fmt(row.p_value, "%7.4f") + "  " + to_string(row.region) + "\n";
    }
    out += "\n";

    out += "rescored totals (over fair items, original weights):\n";
    for (const Rescored& row : report.rescored) {
        std::string id = row.examinee_id;
        if (id.size() < 8) id.append(8 - id.size(), ' ');
        out += "  " + id + "  " + fmt(row.score, "%8.3f") + "  (" + fmt(row.percent, "%.1f") +
               "%)\n";
    }
    return out;
}

GroupComparison compare_groups(std::span<const std::pair<std::string, NormalizedMatrix>> groups,
                               const ConsensusConfig& cfg) {
    if (groups.size() < 2) throw ValidationError("group comparison needs at least 2 groups");

    const std::vector<std::string>& item_ids = groups.front().second.raw.item_ids;
    std::unordered_set<std::string> labels;
    for (const auto& [label, m] : groups) {
        if (label.empty()) throw ValidationError("group label is empty");
        if (!labels.insert(label).second)
            throw ValidationError("duplicate group label '" + label + "'");
        if (m.raw.item_ids != item_ids) {
            throw ValidationError("group '" + label +
                                  "' does not share the item id set of the first group");
        }
    }

    // Pooled matrix: stack raw rows, prefix examinee ids with the group label.
    ScoreMatrix pooled;
    pooled.item_ids = item_ids;
    pooled.max_scores = groups.front().second.raw.max_scores;
    Eigen::Index total_rows = 0;
    for (const auto& [label, m] : groups) {
        if (m.raw.max_scores.size() != pooled.max_scores.size() ||
            (m.raw.max_scores.array() != pooled.max_scores.array()).any()) {
            throw ValidationError("group '" + label + "' differs in per-item maximum scores");
        }
        total_rows += m.raw.scores.rows();
    }
    pooled.scores.resize(total_rows, static_cast<Eigen::Index>(item_ids.size()));
    pooled.examinee_ids.reserve(static_cast<std::size_t>(total_rows));
    Eigen::Index row = 0;
    for (const auto& [label, m] : groups) {
        pooled.scores.middleRows(row, m.raw.scores.rows()) = m.raw.scores;
        for (const std::string& id : m.raw.examinee_ids) {
            pooled.examinee_ids.push_back(label + "/" + id);
        }
        row += m.raw.scores.rows();
    }

    struct GroupRun {
        std::string label;
        std::unordered_map<std::string, double> first_round_d;
        std::unordered_set<std::string> flagged;
    };
    std::vector<GroupRun> runs;
    auto run_one = [&cfg](const std::string& label, const NormalizedMatrix& m) {
        GroupRun run;
        run.label = label;
        const AnalysisResult analysis = detect_unfair(m, cfg);
        for (const ItemPoint& p : analysis.iterations.front().item_points) {
            run.first_round_d.emplace(p.item_id, p.d);
        }
        for (const ItemPoint& p : analysis.unfair_items) run.flagged.insert(p.item_id);
        return run;
    };
    for (const auto& [label, m] : groups) runs.push_back(run_one(label, m));
    runs.push_back(run_one(pooled_group_label, normalize(pooled)));

    GroupComparison cmp;
    for (const std::string& id : item_ids) {
        const bool somewhere_flagged =
            std::any_of(runs.begin(), runs.end() - 1,
                        [&id](const GroupRun& run) { return run.flagged.contains(id); });
        if (somewhere_flagged) cmp.item_ids.push_back(id);
    }
    for (const GroupRun& run : runs) {
        cmp.group_labels.push_back(run.label);
        std::vector<GroupCell> cells;
        cells.reserve(cmp.item_ids.size());
        for (const std::string& id : cmp.item_ids) {
            cells.push_back({id, run.first_round_d.at(id), run.flagged.contains(id)});
        }
        cmp.cells.push_back(std::move(cells));
    }
    return cmp;
}

nlohmann::json comparison_to_json(const GroupComparison& cmp) {
    json doc;
    doc["item_ids"] = cmp.item_ids;
    doc["groups"] = json::array();
    for (std::size_t g = 0; g < cmp.group_labels.size(); ++g) {
        json cells = json::array();
        for (const GroupCell& cell : cmp.cells[g]) {
            cells.push_back({{"item", cell.item_id}, {"d", cell.d}, {"flagged", cell.flagged}});
        }
        doc["groups"].push_back({{"label", cmp.group_labels[g]}, {"cells", std::move(cells)}});
    }
    return doc;
}

std::string render_comparison_text(const GroupComparison& cmp) {
    std::string out;
    out += "distances from the ideal line for items flagged unfair in at least one group\n";
    out += "(values in [brackets] were not flagged in that group)\n\n";
    std::size_t label_width = 8;
    for (const std::string& label : cmp.group_labels) label_width = std::max(label_width, label.size());

    std::string header(label_width + 2, ' ');
    for (const std::string& id : cmp.item_ids) {
        std::string cell = id;
        if (cell.size() < 10) cell.insert(0, 10 - cell.size(), ' ');
        header += cell;
    }
    out += header + "\n";
    for (std::size_t g = 0; g < cmp.group_labels.size(); ++g) {
        std::string line = cmp.group_labels[g];
        line.append(label_width + 2 - line.size(), ' ');
        for (const GroupCell& cell : cmp.cells[g]) {
            std::string value = fmt(cell.d, "%.2f");
            value = cell.flagged ? " " + value + " " : "[" + value + "]";
            if (value.size() < 10) value.insert(0, 10 - value.size(), ' ');
            line += value;
        }
        out += line + "\n";
    }
    return out;
}

}  // namespace fairline
