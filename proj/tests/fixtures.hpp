// Shared deterministic fixtures for the test suites.
#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fairline/score_matrix.hpp"

namespace fixtures {

// Exact elementwise equality, including shape.
template <typename A, typename B>
bool same(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           (a.derived().array() == b.derived().array()).all();
}

inline fairline::ScoreMatrix make_matrix(std::vector<std::string> examinees,
                                         std::vector<std::string> items,
                                         const std::vector<std::vector<double>>& rows,
                                         std::vector<double> maxima = {}) {
    fairline::ScoreMatrix m;
    m.examinee_ids = std::move(examinees);
    m.item_ids = std::move(items);
    m.scores.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m.scores(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    if (maxima.empty()) {
        m.max_scores = Eigen::VectorXd::Ones(m.scores.cols());
    } else {
        m.max_scores.resize(static_cast<Eigen::Index>(maxima.size()));
        for (std::size_t c = 0; c < maxima.size(); ++c) {
            m.max_scores(static_cast<Eigen::Index>(c)) = maxima[c];
        }
    }
    return m;
}

inline std::vector<std::string> id_list(const char* prefix, int count) {
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) ids.push_back(prefix + std::to_string(i));
    return ids;
}

// Random exam-like score matrix: rows share an ability level, items differ
// in difficulty, so columns correlate with the totals the way real cohorts
// do. Totals are guaranteed non-tied.
inline fairline::ScoreMatrix random_matrix(std::mt19937_64& rng, int k, int n, bool dichotomous) {
    fairline::ScoreMatrix m;
    m.examinee_ids = id_list("s", k);
    m.item_ids = id_list("i", n);
    m.max_scores = Eigen::VectorXd::Ones(n);
    m.scores.resize(k, n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    while (true) {
        std::vector<double> difficulty(static_cast<std::size_t>(n));
        for (double& d : difficulty) d = -0.25 + 0.5 * unit(rng);
        for (int r = 0; r < k; ++r) {
            const double ability = 0.05 + 0.9 * unit(rng);
            for (int c = 0; c < n; ++c) {
                const double level = ability - difficulty[static_cast<std::size_t>(c)];
                if (dichotomous) {
                    const double p = std::min(0.98, std::max(0.02, level));
                    m.scores(r, c) = unit(rng) < p ? 1.0 : 0.0;
                } else {
                    m.scores(r, c) = clamp01(level + 0.4 * (unit(rng) - 0.5));
                }
            }
        }
        const Eigen::VectorXd totals = m.scores.rowwise().mean();
        const Eigen::VectorXd centered = totals.array() - totals.mean();
        if (centered.squaredNorm() > 1e-9) break;  // avoid tied cohorts
    }
    return m;
}

// Exam whose every column equals the totals vector: all points sit at (0, 1).
// Dyadic values keep column means exact in binary floating point.
inline fairline::ScoreMatrix ideal_exam(int k, int n) {
    fairline::ScoreMatrix m;
    m.examinee_ids = id_list("s", k);
    m.item_ids = id_list("i", n);
    m.max_scores = Eigen::VectorXd::Ones(n);
    m.scores.resize(k, n);
    for (int r = 0; r < k; ++r) {
        const double value = (r % 8) / 8.0;
        for (int c = 0; c < n; ++c) m.scores(r, c) = value;
    }
    return m;
}

}  // namespace fixtures
