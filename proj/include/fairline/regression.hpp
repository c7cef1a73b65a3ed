#pragma once

#include <Eigen/Dense>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fairline/errors.hpp"
#include "fairline/score_matrix.hpp"

namespace fairline {

/// Per-item least-squares line p(g) = b0 + b1 * g, fitted over examinees.
template <typename Scalar>
struct LineFitT {
    Scalar b0;
    Scalar b1;
};
using LineFit = LineFitT<double>;

/// One item as a point in the b0-b1 plane, with its signed distance from
/// the ideal line b0 + b1 - 1 = 0. Negative d is the unfair side.
struct ItemPoint {
    std::string item_id;
    double b0 = 0.0;
    double b1 = 0.0;
    double d = 0.0;
    double mean_item_score = 0.0;
    double residual_variance = 0.0;  // informational; no pass/fail rule attached
    Eigen::Index n_examinees = 0;

    bool operator==(const ItemPoint&) const = default;
};

/// Totals with variance at or below this (per examinee) are treated as a
/// tied cohort: the fit is undefined.
inline constexpr double degenerate_variance_floor = 1e-24;

/// Signed distance from (b0, b1) to the ideal line: (b0 + b1 - 1) / sqrt(2).
template <typename Scalar>
constexpr Scalar distance(Scalar b0, Scalar b1) {
    return (b0 + b1 - Scalar(1)) / std::numbers::sqrt2_v<Scalar>;
}

inline double distance(const LineFit& f) { return distance(f.b0, f.b1); }

/// Ordinary least squares of an item column on the totals:
///   b1 = cov(x, g) / var(g),  b0 = mean(x) - b1 * mean(g).
///
/// Fitting over individual examinees equals the regression of per-grade
/// proportions on g weighted by grade-group size, and is the formulation
/// under which mean(b0) = 0 and mean(b1) = 1 hold exactly over any full
/// item set. Throws DegenerateCohortError when the totals carry no
/// variance (all examinees tied).
template <typename DerivedX, typename DerivedG>
LineFitT<typename DerivedX::Scalar> fit_item(const Eigen::MatrixBase<DerivedX>& item_column,
                                             const Eigen::MatrixBase<DerivedG>& totals) {
    using Scalar = typename DerivedX::Scalar;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    const Eigen::Index k = totals.size();
    if (item_column.size() != k) throw ValidationError("item column and totals differ in length");
    if (k < 2) throw ValidationError("fit needs at least 2 examinees");

    const Scalar g_mean = totals.derived().mean();
    const Scalar x_mean = item_column.derived().mean();

    const Vec g_centered = totals.derived().array() - g_mean;
    const Vec x_centered = item_column.derived().array() - x_mean;

    const Scalar ss_g = g_centered.dot(g_centered);
    if (!(ss_g > Scalar(degenerate_variance_floor) * Scalar(k))) {
        throw DegenerateCohortError("total scores have zero variance; regression is undefined");
    }

    const Scalar b1 = g_centered.dot(x_centered) / ss_g;
    return {x_mean - b1 * g_mean, b1};
}

/// Subset totals: mean over the listed item columns only (N = subset size).
inline Eigen::VectorXd subset_totals(const NormalizedMatrix& m,
                                     std::span<const Eigen::Index> items) {
    if (items.empty()) throw ValidationError("item subset is empty");
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(m.entries.rows());
    for (const Eigen::Index i : items) sum += m.entries.col(i);
    return sum / static_cast<double>(items.size());
}

/// Fits every item in the subset against totals recomputed over that same
/// subset, and packages coefficients, distance and residual variance.
inline std::vector<ItemPoint> fit_all(const NormalizedMatrix& m,
                                      std::span<const Eigen::Index> items) {
    const Eigen::VectorXd totals = subset_totals(m, items);
    const double k = static_cast<double>(m.entries.rows());

    std::vector<ItemPoint> points;
    points.reserve(items.size());
    for (const Eigen::Index i : items) {
        const auto col = m.entries.col(i);
        const LineFit fit = fit_item(col, totals);
        ItemPoint p;
        p.item_id = m.raw.item_ids[static_cast<std::size_t>(i)];
        p.b0 = fit.b0;
        p.b1 = fit.b1;
        p.d = distance(fit);
        p.mean_item_score = col.mean();
        p.residual_variance =
            (col.array() - (fit.b0 + fit.b1 * totals.array())).matrix().squaredNorm() / k;
        p.n_examinees = m.entries.rows();
        points.push_back(std::move(p));
    }
    return points;
}

/// Fit over the full item set.
inline std::vector<ItemPoint> fit_all(const NormalizedMatrix& m) {
    std::vector<Eigen::Index> all(static_cast<std::size_t>(m.item_count()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);
    return fit_all(m, all);
}

}  // namespace fairline
