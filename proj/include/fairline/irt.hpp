#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fairline/regression.hpp"
#include "fairline/score_matrix.hpp"

namespace fairline {

/// Logistic scaling constant of the three-parameter model.
inline constexpr double irt_scale_d = 1.701;

/// Three-parameter logistic item, plus a ceiling on the attainable correct
/// probability. cap = 1 is the plain 3PL item; cap < 1 models an item no
/// level of ability fully copes with, which is what makes it unfair.
/// cap = 0 is the degenerate item nobody can answer.
struct IrtItem {
    std::string id;
    double a = 1.0;    // discrimination, > 0
    double b = 0.0;    // difficulty on the theta scale
    double c = 0.0;    // pseudo-guessing probability, in [0, 1)
    double cap = 1.0;  // in (c, 1], or exactly 0

    bool unfair() const { return cap < 1.0; }
};

void validate(const IrtItem& item);

enum class ThetaDistribution { Uniform, Normal };

struct CohortSpec {
    int n_examinees = 0;
    double theta_low = -3.0;
    double theta_high = 3.0;
    ThetaDistribution theta_distribution = ThetaDistribution::Uniform;
    std::uint64_t seed = 0;
};

/// cap * (c + (1 - c) / (1 + exp(-D a (theta - b)))). Nondecreasing in
/// theta, bounded by [c * cap, cap].
double icc(double theta, const IrtItem& item);

/// Deterministic per-row random stream: an mt19937_64 engine seeded with
/// seed_seq{seed, row}, with uniforms built as (x >> 11) * 2^-53 and
/// normals via Box-Muller. Rows can be generated independently and in any
/// order without changing the output.
class RowRng {
public:
    RowRng(std::uint64_t seed, std::uint64_t row);

    double uniform01();                              // in [0, 1)
    double uniform(double lo, double hi);            // in [lo, hi)
    double truncated_normal(double lo, double hi);   // standard normal, rejected to [lo, hi]
    bool bernoulli(double p) { return uniform01() < p; }

    /// Algorithm identifier recorded in generated sidecars.
    static const char* algorithm();

private:
    std::mt19937_64 engine_;
};

struct GeneratedExam {
    ScoreMatrix scores;                        // dichotomous, unit maxima
    std::vector<std::string> unfair_item_ids;  // items generated with cap < 1
    std::string rng_algorithm;
};

/// Draws one theta per examinee from the cohort distribution, then one
/// Bernoulli response per (examinee, item) with probability icc(theta,
/// item). Byte-identical output for identical spec and seed.
GeneratedExam generate(std::span<const IrtItem> items, const CohortSpec& cohort);

/// Crossing structure of two item characteristic curves over a theta grid.
struct CrossingReport {
    bool coincide = false;            // curves agree everywhere on the grid
    std::vector<double> crossings;    // theta of each sign change, bisection-refined
};

CrossingReport lords_paradox_check(const IrtItem& item_a, const IrtItem& item_b,
                                   std::span<const double> theta_grid);

/// Intersection of two fitted item lines p = b0 + b1 g. Distinct lines meet
/// at most once, so two fair-item lines through (1, 1) can only meet there.
struct LineIntersection {
    enum class Kind { Coincident, Parallel, Point } kind = Kind::Point;
    double g = 0.0;
    double p = 0.0;
};

LineIntersection intersect_lines(const LineFit& a, const LineFit& b);

/// Reads an item list from a JSON document: {"items": [{"id", "a", "b",
/// "c", "cap"}, ...]} with c defaulting to 0, cap to 1 and id to a
/// 1-based "iNN" label. Throws ParseError on malformed documents.
std::vector<IrtItem> parse_item_spec(const std::string& text);

std::string write_item_spec(std::span<const IrtItem> items);

}  // namespace fairline
