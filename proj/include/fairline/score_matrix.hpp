#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fairline/errors.hpp"

namespace fairline {

/// Raw person-by-item scores. Rows are examinees, columns are items.
/// Each item has its own positive maximum attainable score.
struct ScoreMatrix {
    std::vector<std::string> examinee_ids;  // length K
    std::vector<std::string> item_ids;      // length N
    Eigen::MatrixXd scores;                 // K x N, 0 <= scores(k,i) <= max_scores(i)
    Eigen::VectorXd max_scores;             // length N, strictly positive

    Eigen::Index examinee_count() const { return scores.rows(); }
    Eigen::Index item_count() const { return scores.cols(); }
};

/// Scores mapped to [0,1] per item, plus per-examinee normalized totals
/// g_k = (sum_i entries(k,i)) / N. The originating raw matrix is kept so
/// rescoring can restore the original item weights.
struct NormalizedMatrix {
    ScoreMatrix raw;
    Eigen::MatrixXd entries;  // K x N in [0,1]
    Eigen::VectorXd totals;   // length K, each in [0,1]

    Eigen::Index examinee_count() const { return entries.rows(); }
    Eigen::Index item_count() const { return entries.cols(); }
};

/// Throws ValidationError when a ScoreMatrix invariant is violated:
/// K >= 2, N >= 2, id lists match the grid, no duplicate ids,
/// positive maxima, and 0 <= score <= max per cell.
void validate(const ScoreMatrix& m);

/// Divides each column by its maximum score and computes the totals.
/// Dichotomous inputs (all maxima 1) pass through unchanged.
NormalizedMatrix normalize(const ScoreMatrix& m);

/// Totals in examinee order; the percentage score of examinee k is 100 * g_k.
inline const Eigen::VectorXd& total_scores(const NormalizedMatrix& m) { return m.totals; }

}  // namespace fairline
