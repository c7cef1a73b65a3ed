#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairline/csv.hpp"
#include "fairline/irt.hpp"
#include "fairline/report.hpp"
#include "fairline/svg_plane.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fairline;

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;    // unreadable/malformed input, bad flags, write failure
constexpr int exit_degenerate = 2; // tied cohort or consensus collapse

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

struct CutoffFlags {
    std::string rule = "mad";
    double fixed_cutoff = 0.2;
    double mad_multiplier = 3.0;
    double cutoff_floor = 0.1;
    std::size_t max_iterations = 0;  // 0: item count

    ConsensusConfig to_config() const {
        ConsensusConfig cfg;
        cfg.cutoff_rule = rule == "fixed" ? CutoffRule::Fixed : CutoffRule::MadScaled;
        cfg.fixed_cutoff = fixed_cutoff;
        cfg.mad_multiplier = mad_multiplier;
        cfg.cutoff_floor = cutoff_floor;
        if (max_iterations > 0) cfg.max_iterations = max_iterations;
        return cfg;
    }
};

void add_cutoff_flags(CLI::App& cmd, CutoffFlags& flags) {
    cmd.add_option("--cutoff-rule", flags.rule, "Cutoff rule: mad or fixed")
        ->check(CLI::IsMember({"mad", "fixed"}));
    cmd.add_option("--fixed-cutoff", flags.fixed_cutoff, "d_f used by the fixed rule");
    cmd.add_option("--mad-multiplier", flags.mad_multiplier, "MAD multiplier of the mad rule");
    cmd.add_option("--cutoff-floor", flags.cutoff_floor, "Lower bound on d_f under the mad rule");
    cmd.add_option("--max-iterations", flags.max_iterations,
                   "Elimination round limit (default: item count)");
}

std::vector<RegionLabel> regions_for(const std::vector<ItemPoint>& points,
                                     const std::vector<ClassicRow>& classic, double d_f) {
    std::vector<RegionLabel> regions;
    regions.reserve(points.size());
    for (const ItemPoint& p : points) {
        std::optional<double> r;
        for (const ClassicRow& row : classic) {
            if (row.id == p.item_id) {
                r = row.r;
                break;
            }
        }
        regions.push_back(classify_region(p, r, d_f));
    }
    return regions;
}

int run_analyze(const std::string& input, const CutoffFlags& flags, const std::string& out_dir,
                const std::string& plot, const std::string& format) {
    const ScoreMatrix raw = parse_score_csv(read_file(input));
    const NormalizedMatrix m = normalize(raw);
    const ConsensusConfig cfg = flags.to_config();
    const AnalysisResult analysis = detect_unfair(m, cfg);
    const Report report = make_report(m, analysis, cfg);

    fs::create_directories(out_dir);
    const std::string json_text = serialize_report(report);
    write_file(fs::path(out_dir) / "report.json", json_text);
    const std::string text = render_text(report);
    write_file(fs::path(out_dir) / "report.txt", text);

    if (plot == "svg") {
        for (std::size_t i = 0; i < report.iterations.size(); ++i) {
            const IterationRecord& round = report.iterations[i];
            PlotSpec spec;
            spec.points = round.item_points;
            spec.regions = regions_for(round.item_points, report.classic, round.d_f);
            spec.d_f = round.d_f;
            write_file(fs::path(out_dir) / ("plane_iter" + std::to_string(i + 1) + ".svg"),
                       render_plane(spec));
        }
        PlotSpec final_spec;
        final_spec.points = analysis.final_points;
        final_spec.regions = regions_for(analysis.final_points, report.classic, analysis.final_d_f);
        final_spec.d_f = analysis.final_d_f;
        write_file(fs::path(out_dir) / "plane_final.svg", render_plane(final_spec));
    }

    std::cout << (format == "json" ? json_text : text);
    return exit_ok;
}

int run_generate(const std::string& items_path, int examinees, std::uint64_t seed,
                 const std::string& theta, const std::string& out_path) {
    const std::vector<IrtItem> items = parse_item_spec(read_file(items_path));
    CohortSpec cohort;
    cohort.n_examinees = examinees;
    cohort.seed = seed;
    cohort.theta_distribution =
        theta == "normal" ? ThetaDistribution::Normal : ThetaDistribution::Uniform;

    const GeneratedExam exam = generate(items, cohort);
    write_file(out_path, write_score_csv(exam.scores));

    fs::path truth = out_path;
    truth.replace_extension(".truth.json");
    nlohmann::json sidecar;
    sidecar["seed"] = seed;
    sidecar["n_examinees"] = examinees;
    sidecar["theta_distribution"] = theta;
    sidecar["rng"] = exam.rng_algorithm;
    sidecar["unfair_items"] = exam.unfair_item_ids;
    sidecar["items"] = nlohmann::json::array();
    for (const IrtItem& item : items) {
        sidecar["items"].push_back(
            {{"id", item.id}, {"a", item.a}, {"b", item.b}, {"c", item.c}, {"cap", item.cap}});
    }
    write_file(truth, sidecar.dump(2) + "\n");

    std::cout << "wrote " << out_path << " and " << truth.string() << "\n";
    return exit_ok;
}

int run_compare(const std::vector<std::string>& group_specs, const CutoffFlags& flags,
                const std::string& out_dir) {
    std::vector<std::pair<std::string, NormalizedMatrix>> groups;
    for (const std::string& spec : group_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            throw ValidationError("--group expects LABEL=PATH, got '" + spec + "'");
        }
        const std::string label = spec.substr(0, eq);
        const std::string path = spec.substr(eq + 1);
        groups.emplace_back(label, normalize(parse_score_csv(read_file(path))));
    }

    const GroupComparison cmp = compare_groups(groups, flags.to_config());
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "comparison.json", comparison_to_json(cmp).dump(2) + "\n");
    const std::string text = render_comparison_text(cmp);
    write_file(fs::path(out_dir) / "comparison.txt", text);
    std::cout << text;
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exam item fairness analysis: per-item regression against the "
                 "ideal line with iterative elimination of unfair items"};
    app.require_subcommand(1);

    // analyze
    std::string input, out_dir = "fairline-out", plot = "svg", format = "text";
    CutoffFlags analyze_flags;
    CLI::App* analyze = app.add_subcommand("analyze", "Analyze a score CSV");
    analyze->add_option("input", input, "Score CSV file")->required();
    add_cutoff_flags(*analyze, analyze_flags);
    analyze->add_option("--out-dir", out_dir, "Output directory");
    analyze->add_option("--plot", plot, "Plane plots: svg or none")
        ->check(CLI::IsMember({"svg", "none"}));
    analyze->add_option("--format", format, "Stdout format: json or text")
        ->check(CLI::IsMember({"json", "text"}));

    // generate
    std::string items_path, theta = "uniform", gen_out = "exam.csv";
    int examinees = 0;
    std::uint64_t seed = 0;
    CLI::App* gen = app.add_subcommand("generate", "Generate a synthetic exam from item curves");
    gen->add_option("--items", items_path, "Item spec JSON file")->required();
    gen->add_option("--examinees", examinees, "Number of examinees")->required();
    gen->add_option("--seed", seed, "RNG seed");
    gen->add_option("--theta", theta, "Ability distribution: uniform or normal")
        ->check(CLI::IsMember({"uniform", "normal"}));
    gen->add_option("--out", gen_out, "Output CSV path (truth sidecar goes next to it)");

    // compare
    std::vector<std::string> group_specs;
    std::string cmp_out_dir = "fairline-out";
    CutoffFlags compare_flags;
    CLI::App* compare = app.add_subcommand("compare", "Compare unfair-item sets across groups");
    compare->add_option("--group", group_specs, "Group as LABEL=PATH, repeatable")->required();
    add_cutoff_flags(*compare, compare_flags);
    compare->add_option("--out-dir", cmp_out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    try {
        if (analyze->parsed()) return run_analyze(input, analyze_flags, out_dir, plot, format);
        if (gen->parsed()) {
            if (examinees < 2) {
                std::cerr << "error: --examinees must be at least 2\n";
                return exit_invalid;
            }
            return run_generate(items_path, examinees, seed, theta, gen_out);
        }
        if (compare->parsed()) return run_compare(group_specs, compare_flags, cmp_out_dir);
    } catch (const DegenerateCohortError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const ConsensusCollapseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_degenerate;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_invalid;
    }
    return exit_invalid;
}
