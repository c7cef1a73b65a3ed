#include <doctest.h>

#include <numbers>
#include <random>
#include <set>

#include "fairline/consensus.hpp"
#include "fairline/report.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace fairline;

TEST_CASE("cutoff hits the floor when all distances are zero") {
    const std::vector<double> d(10, 0.0);
    ConsensusConfig cfg;
    CHECK(find_cutoff(d, cfg) == cfg.cutoff_floor);
}

TEST_CASE("fixed rule returns the configured cutoff") {
    ConsensusConfig cfg;
    cfg.cutoff_rule = CutoffRule::Fixed;
    cfg.fixed_cutoff = 0.2;
    CHECK(find_cutoff(std::vector<double>{0.5, -0.4, 0.1}, cfg) == 0.2);
}

TEST_CASE("mad cutoff matches the direct-formula oracle") {
    const std::vector<double> d{0.05, 0.02, -0.01, 0.03, -0.60};
    ConsensusConfig cfg;  // multiplier 3, floor 0.1
    const double got = find_cutoff(d, cfg);
    const double expected = static_cast<double>(oracle::mad_cutoff(d, 3.0L, 0.1L));
    CHECK(got == doctest::Approx(expected).epsilon(1e-14));
    // median 0.02, MAD 0.03: 3 * 1.4826 * 0.03
    CHECK(got == doctest::Approx(0.1334340).epsilon(1e-9));

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dist(-0.8, 0.3);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> sample(3 + rng() % 40);
        for (double& v : sample) v = dist(rng);
        CHECK(find_cutoff(sample, cfg) ==
              doctest::Approx(static_cast<double>(oracle::mad_cutoff(sample, 3.0L, 0.1L)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("fewer than 3 distances is an error") {
    ConsensusConfig cfg;
    CHECK_THROWS_AS(find_cutoff(std::vector<double>{0.1, 0.2}, cfg), ValidationError);
}

TEST_CASE("ideal exam: one round, nothing removed") {
    const NormalizedMatrix nm = normalize(fixtures::ideal_exam(16, 8));
    const AnalysisResult result = detect_unfair(nm, ConsensusConfig{});
    CHECK(result.iterations.size() == 1);
    CHECK(result.iterations.front().removed.empty());
    CHECK(result.unfair_items.empty());
    CHECK(result.fair_items.size() == 8);
}

TEST_CASE("an injected all-wrong item is removed in a two-round run") {
    ScoreMatrix m = fixtures::ideal_exam(16, 21);
    m.scores.col(20).setZero();
    m.item_ids[20] = "bad";
    const NormalizedMatrix nm = normalize(m);

    const AnalysisResult result = detect_unfair(nm, ConsensusConfig{});
    REQUIRE(result.iterations.size() == 2);
    CHECK(result.iterations[0].removed == std::vector<std::string>{"bad"});
    CHECK(result.iterations[1].removed.empty());
    REQUIRE(result.unfair_items.size() == 1);
    CHECK(result.unfair_items[0].item_id == "bad");
    CHECK(result.unfair_items[0].d ==
          doctest::Approx(-1.0 / std::numbers::sqrt2).epsilon(1e-12));
    CHECK(result.fair_items.size() == 20);

    // Independent single-pass check: fit each column by the oracle, apply
    // the cutoff formula directly, and confirm the removal set.
    const Eigen::VectorXd totals = nm.entries.rowwise().mean();
    std::vector<double> distances;
    for (Eigen::Index c = 0; c < nm.entries.cols(); ++c) {
        const Eigen::VectorXd col = nm.entries.col(c);
        const oracle::Fit fit = oracle::ols_normal_equations(
            std::span<const double>(col.data(), static_cast<std::size_t>(col.size())),
            std::span<const double>(totals.data(), static_cast<std::size_t>(totals.size())));
        distances.push_back(static_cast<double>((fit.b0 + fit.b1 - 1.0L) / std::numbers::sqrt2_v<long double>));
    }
    const double d_f = static_cast<double>(oracle::mad_cutoff(distances, 3.0L, 0.1L));
    std::vector<std::string> removed;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (distances[i] < -d_f) removed.push_back(nm.raw.item_ids[i]);
    }
    CHECK(removed == result.iterations[0].removed);
    CHECK(d_f == doctest::Approx(result.iterations[0].d_f).epsilon(1e-12));
}

TEST_CASE("rescoring keeps original weights") {
    // 40 items at 2.5 points each; removing 4 leaves a 90-point maximum.
    std::vector<double> all(40, 2.5), none(40, 0.0);
    const ScoreMatrix m = fixtures::make_matrix({"s1", "s2"}, fixtures::id_list("i", 40),
                                                {all, none}, std::vector<double>(40, 2.5));
    std::vector<std::string> fair;
    for (int i = 5; i <= 40; ++i) fair.push_back("i" + std::to_string(i));  // drop i1..i4

    const std::vector<Rescored> rescored = rescore(m, fair);
    CHECK(rescored[0].score == doctest::Approx(90.0));
    CHECK(rescored[0].percent == doctest::Approx(100.0));
    CHECK(rescored[1].score == 0.0);
    CHECK(rescored[1].percent == 0.0);
}

TEST_CASE("rescoring with every item fair reproduces raw totals") {
    std::mt19937_64 rng(5);
    const ScoreMatrix m = fixtures::random_matrix(rng, 10, 6, true);
    const std::vector<Rescored> rescored = rescore(m, m.item_ids);
    for (Eigen::Index r = 0; r < m.scores.rows(); ++r) {
        CHECK(rescored[static_cast<std::size_t>(r)].score ==
              doctest::Approx(m.scores.row(r).sum()));
    }
}

TEST_CASE("examinee correct only on removed items rescoreds to zero") {
    ScoreMatrix m = fixtures::make_matrix(
        {"s1", "s2", "s3", "s4"}, {"i1", "i2", "i3"},
        {{1, 1, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const std::vector<Rescored> rescored = rescore(m, std::vector<std::string>{"i1", "i2"});
    CHECK(rescored[3].score == 0.0);
}

TEST_CASE("rescore rejects an empty or unknown fair set") {
    std::mt19937_64 rng(6);
    const ScoreMatrix m = fixtures::random_matrix(rng, 5, 4, true);
    CHECK_THROWS_AS(rescore(m, std::vector<std::string>{}), ValidationError);
    CHECK_THROWS_AS(rescore(m, std::vector<std::string>{"nope"}), ValidationError);
}

TEST_CASE("bookkeeping invariants hold on random matrices") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 40 + static_cast<int>(rng() % 80);
        const int n = 3 + static_cast<int>(rng() % 30);
        const NormalizedMatrix nm =
            normalize(fixtures::random_matrix(rng, k, n, trial % 2 == 0));
        const AnalysisResult result = detect_unfair(nm, ConsensusConfig{});

        CHECK(result.iterations.size() <= static_cast<std::size_t>(n));
        std::set<std::string> seen;
        for (const IterationRecord& round : result.iterations) {
            for (const std::string& id : round.removed) {
                CHECK(seen.insert(id).second);  // disjoint across rounds
            }
        }
        CHECK(seen.size() == result.unfair_items.size());
        std::set<std::string> all(result.fair_items.begin(), result.fair_items.end());
        CHECK(all.size() == result.fair_items.size());
        for (const ItemPoint& p : result.unfair_items) CHECK(all.insert(p.item_id).second);
        CHECK(all.size() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("identical input and config produce identical serialized results") {
    std::mt19937_64 rng(31);
    const ScoreMatrix m = fixtures::random_matrix(rng, 60, 12, true);
    const NormalizedMatrix nm = normalize(m);
    ConsensusConfig cfg;
    const AnalysisResult a = detect_unfair(nm, cfg);
    const AnalysisResult b = detect_unfair(nm, cfg);
    CHECK(a == b);
    CHECK(serialize_report(make_report(nm, a, cfg)) == serialize_report(make_report(nm, b, cfg)));
}

TEST_CASE("max_iterations bounds the loop") {
    ScoreMatrix m = fixtures::ideal_exam(16, 12);
    m.scores.col(10).setZero();
    m.scores.col(11).setZero();
    ConsensusConfig cfg;
    cfg.max_iterations = 1;
    const AnalysisResult result = detect_unfair(normalize(m), cfg);
    CHECK(result.iterations.size() == 1);
    // The final fit still describes the fair set.
    CHECK(result.final_points.size() == result.fair_items.size());
}

TEST_CASE("detection requires at least 3 items") {
    const ScoreMatrix m =
        fixtures::make_matrix({"s1", "s2", "s3"}, {"i1", "i2"}, {{1, 0}, {0, 1}, {1, 1}});
    CHECK_THROWS_AS(detect_unfair(normalize(m), ConsensusConfig{}), ValidationError);
}

TEST_CASE("degenerate cohort propagates out of detection") {
    const ScoreMatrix m = fixtures::make_matrix(
        {"s1", "s2", "s3"}, {"i1", "i2", "i3"},
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});  // every total is 1/3
    CHECK_THROWS_AS(detect_unfair(normalize(m), ConsensusConfig{}), DegenerateCohortError);
}

TEST_CASE("positive-distance sum does not increase after elimination") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        ScoreMatrix m = fixtures::ideal_exam(24, 15);
        // Two injected low-ceiling items: even strong rows rarely score.
        for (Eigen::Index r = 0; r < m.scores.rows(); ++r) {
            m.scores(r, 13) = (m.scores(r, 13) >= 0.5 && rng() % 4 == 0) ? 1.0 : 0.0;
            m.scores(r, 14) = 0.0;
        }
        const AnalysisResult result = detect_unfair(normalize(m), ConsensusConfig{});
        if (result.unfair_items.empty()) continue;
        const double before = sum_positive_distances(result.iterations.front().item_points);
        const double after = sum_positive_distances(result.final_points);
        CHECK(after <= before + 1e-12);
    }
}
