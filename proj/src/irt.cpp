#include "fairline/irt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <json.hpp>

namespace fairline {

void validate(const IrtItem& item) {
    if (item.id.empty()) throw ValidationError("item id is empty");
    if (!(item.a > 0.0)) throw ValidationError("item '" + item.id + "': a must be positive");
    if (!(item.c >= 0.0 && item.c < 1.0))
        throw ValidationError("item '" + item.id + "': c must be in [0, 1)");
    if (!(item.cap >= 0.0 && item.cap <= 1.0))
        throw ValidationError("item '" + item.id + "': cap must be in [0, 1]");
    if (item.cap != 0.0 && !(item.cap > item.c))
        throw ValidationError("item '" + item.id + "': cap must exceed c");
}

double icc(double theta, const IrtItem& item) {
    return item.cap *
           (item.c + (1.0 - item.c) / (1.0 + std::exp(-irt_scale_d * item.a * (theta - item.b))));
}

RowRng::RowRng(std::uint64_t seed, std::uint64_t row) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(row >> 32)};
    engine_.seed(seq);
}

double RowRng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RowRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RowRng::truncated_normal(double lo, double hi) {
    while (true) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double z1 = radius * std::cos(2.0 * std::numbers::pi * u2);
        if (z1 >= lo && z1 <= hi) return z1;
        const double z2 = radius * std::sin(2.0 * std::numbers::pi * u2);
        if (z2 >= lo && z2 <= hi) return z2;
    }
}

const char* RowRng::algorithm() {
    return "mt19937_64 per-row stream seeded with seed_seq{seed, row}; "
           "u01 = (x >> 11) * 2^-53; normal via Box-Muller with rejection";
}

GeneratedExam generate(std::span<const IrtItem> items, const CohortSpec& cohort) {
    if (items.size() < 2) throw ValidationError("generation needs at least 2 items");
    if (cohort.n_examinees < 2) throw ValidationError("generation needs at least 2 examinees");
    if (!(cohort.theta_low < cohort.theta_high))
        throw ValidationError("theta_low must be below theta_high");
    std::unordered_set<std::string> ids;
    for (const IrtItem& item : items) {
        validate(item);
        if (!ids.insert(item.id).second)
            throw ValidationError("duplicate item id '" + item.id + "'");
    }

    const auto k = static_cast<Eigen::Index>(cohort.n_examinees);
    const auto n = static_cast<Eigen::Index>(items.size());

    GeneratedExam exam;
    exam.rng_algorithm = RowRng::algorithm();
    exam.scores.scores.resize(k, n);
    exam.scores.max_scores = Eigen::VectorXd::Ones(n);
    exam.scores.item_ids.reserve(items.size());
    for (const IrtItem& item : items) {
        exam.scores.item_ids.push_back(item.id);
        if (item.unfair()) exam.unfair_item_ids.push_back(item.id);
    }

    const int width = static_cast<int>(std::to_string(cohort.n_examinees).size());
    exam.scores.examinee_ids.reserve(static_cast<std::size_t>(k));
    for (Eigen::Index r = 0; r < k; ++r) {
        std::string label = std::to_string(r + 1);
        label.insert(0, static_cast<std::size_t>(width) - label.size(), '0');
        exam.scores.examinee_ids.push_back("s" + label);

        RowRng rng(cohort.seed, static_cast<std::uint64_t>(r));
        const double theta = cohort.theta_distribution == ThetaDistribution::Uniform
                                 ? rng.uniform(cohort.theta_low, cohort.theta_high)
                                 : rng.truncated_normal(cohort.theta_low, cohort.theta_high);
        for (Eigen::Index i = 0; i < n; ++i) {
            exam.scores.scores(r, i) =
                rng.bernoulli(icc(theta, items[static_cast<std::size_t>(i)])) ? 1.0 : 0.0;
        }
    }
    return exam;
}

namespace {

double icc_difference(double theta, const IrtItem& a, const IrtItem& b) {
    return icc(theta, a) - icc(theta, b);
}

// Refines a sign-change bracket to ~1e-10.
double bisect_crossing(double lo, double hi, const IrtItem& a, const IrtItem& b) {
    double f_lo = icc_difference(lo, a, b);
    for (int step = 0; step < 200 && hi - lo > 1e-10; ++step) {
        const double mid = lo + (hi - lo) / 2.0;
        const double f_mid = icc_difference(mid, a, b);
        if ((f_lo < 0.0) == (f_mid < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return lo + (hi - lo) / 2.0;
}

}  // namespace

CrossingReport lords_paradox_check(const IrtItem& item_a, const IrtItem& item_b,
                                   std::span<const double> theta_grid) {
    if (theta_grid.size() < 2) throw ValidationError("crossing check needs at least 2 grid points");
    validate(item_a);
    validate(item_b);

    std::vector<double> diff(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        diff[i] = icc_difference(theta_grid[i], item_a, item_b);
    }

    CrossingReport report;
    report.coincide =
        std::all_of(diff.begin(), diff.end(), [](double v) { return std::abs(v) <= 1e-12; });
    if (report.coincide) return report;

    for (std::size_t i = 1; i < diff.size(); ++i) {
        if (diff[i - 1] * diff[i] < 0.0) {
            report.crossings.push_back(
                bisect_crossing(theta_grid[i - 1], theta_grid[i], item_a, item_b));
        } else if (diff[i] == 0.0 && i + 1 < diff.size() && diff[i - 1] * diff[i + 1] < 0.0) {
            report.crossings.push_back(theta_grid[i]);
        }
    }
    return report;
}

LineIntersection intersect_lines(const LineFit& a, const LineFit& b) {
    LineIntersection out;
    if (a.b0 == b.b0 && a.b1 == b.b1) {
        out.kind = LineIntersection::Kind::Coincident;
        return out;
    }
    if (a.b1 == b.b1) {
        out.kind = LineIntersection::Kind::Parallel;
        return out;
    }
    out.kind = LineIntersection::Kind::Point;
    out.g = (b.b0 - a.b0) / (a.b1 - b.b1);
    out.p = a.b0 + a.b1 * out.g;
    return out;
}

std::vector<IrtItem> parse_item_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("item spec is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("items") || !doc["items"].is_array()) {
        throw ParseError("item spec must be an object with an \"items\" array");
    }

    std::vector<IrtItem> items;
    std::size_t index = 0;
    for (const auto& entry : doc["items"]) {
        ++index;
        if (!entry.is_object()) {
            throw ParseError("item " + std::to_string(index) + " is not an object");
        }
        IrtItem item;
        try {
            item.id = entry.value("id", "i" + std::to_string(index));
            item.a = entry.value("a", 1.0);
            item.b = entry.value("b", 0.0);
            item.c = entry.value("c", 0.0);
            item.cap = entry.value("cap", 1.0);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("item " + std::to_string(index) + ": " + e.what());
        }
        try {
            validate(item);
        } catch (const ValidationError& e) {
            throw ParseError("item " + std::to_string(index) + ": " + e.what());
        }
        items.push_back(std::move(item));
    }
    if (items.size() < 2) throw ParseError("item spec needs at least 2 items");
    return items;
}

std::string write_item_spec(std::span<const IrtItem> items) {
    nlohmann::json doc;
    doc["items"] = nlohmann::json::array();
    for (const IrtItem& item : items) {
        doc["items"].push_back(
            {{"id", item.id}, {"a", item.a}, {"b", item.b}, {"c", item.c}, {"cap", item.cap}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace fairline
