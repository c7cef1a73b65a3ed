#include "fairline/score_matrix.hpp"

#include <cmath>
#include <unordered_set>

namespace fairline {

namespace {

void check_unique(const std::vector<std::string>& ids, const char* what) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!seen.insert(ids[i]).second) {
            throw ValidationError(std::string("duplicate ") + what + " id '" + ids[i] +
                                  "' at position " + std::to_string(i + 1));
        }
    }
}

}  // namespace

void validate(const ScoreMatrix& m) {
    const Eigen::Index k = m.scores.rows();
    const Eigen::Index n = m.scores.cols();
    if (k < 2) throw ValidationError("need at least 2 examinees, got " + std::to_string(k));
    if (n < 2) throw ValidationError("need at least 2 items, got " + std::to_string(n));
    if (static_cast<Eigen::Index>(m.examinee_ids.size()) != k)
        throw ValidationError("examinee id list does not match score rows");
    if (static_cast<Eigen::Index>(m.item_ids.size()) != n)
        throw ValidationError("item id list does not match score columns");
    if (m.max_scores.size() != n)
        throw ValidationError("max_scores length does not match item count");
    check_unique(m.examinee_ids, "examinee");
    check_unique(m.item_ids, "item");
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mx = m.max_scores(i);
        if (!(mx > 0.0) || !std::isfinite(mx)) {
            throw ValidationError("maximum score for item '" + m.item_ids[i] +
                                  "' must be positive, got " + std::to_string(mx));
        }
    }
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const double v = m.scores(r, c);
            if (!std::isfinite(v) || v < 0.0 || v > m.max_scores(c)) {
                throw ValidationError("score " + std::to_string(v) + " for examinee '" +
                                      m.examinee_ids[static_cast<std::size_t>(r)] + "', item '" +
                                      m.item_ids[static_cast<std::size_t>(c)] +
                                      "' is outside [0, max]");
            }
        }
    }
}

NormalizedMatrix normalize(const ScoreMatrix& m) {
    validate(m);
    NormalizedMatrix out;
    out.raw = m;
    out.entries = m.scores.array().rowwise() / m.max_scores.transpose().array();
    out.totals = out.entries.rowwise().mean();
    return out;
}

}  // namespace fairline
