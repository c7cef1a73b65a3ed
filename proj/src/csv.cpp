#include "fairline/csv.hpp"

#include <charconv>
#include <cmath>
#include <unordered_set>
#include <vector>

namespace fairline {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\f\v";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

double parse_number(std::string_view cell, std::size_t row, std::size_t col) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": expected a number, got '" + std::string(cell) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": non-finite number");
    }
    return value;
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

ScoreMatrix parse_score_csv(std::string_view text) {
    // (row, cells) for every non-blank physical line; rows are 1-based.
    std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
    {
        std::size_t row = 0;
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto nl = text.find('\n', start);
            const auto end = (nl == std::string_view::npos) ? text.size() : nl;
            std::string_view line = text.substr(start, end - start);
            ++row;
            if (!trim(line).empty()) lines.emplace_back(row, split_cells(line));
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
    }
    if (lines.empty()) throw ParseError("empty document");

    const auto& header = lines.front().second;
    const std::size_t n = header.size();
    if (n < 2) {
        throw ParseError("row " + std::to_string(lines.front().first) +
                         ": need at least 2 item columns, got " + std::to_string(n));
    }

    ScoreMatrix m;
    m.item_ids.reserve(n);
    std::unordered_set<std::string> seen_items;
    for (std::size_t c = 0; c < n; ++c) {
        std::string id(header[c]);
        if (id.empty()) {
            throw ParseError("row " + std::to_string(lines.front().first) + ", column " +
                             std::to_string(c + 1) + ": empty item id");
        }
        if (!seen_items.insert(id).second) {
            throw ParseError("row " + std::to_string(lines.front().first) + ", column " +
                             std::to_string(c + 1) + ": duplicate item id '" + id + "'");
        }
        m.item_ids.push_back(std::move(id));
    }

    m.max_scores = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    std::size_t body = 1;
    if (lines.size() > 1 && !lines[1].second.empty() && lines[1].second[0] == "#max") {
        const auto& [row, cells] = lines[1];
        if (cells.size() != n + 1) {
            throw ParseError("row " + std::to_string(row) + ": #max row has " +
                             std::to_string(cells.size() - 1) + " values, expected " +
                             std::to_string(n));
        }
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const double mx = parse_number(cells[c], row, c + 1);
            if (!(mx > 0.0)) {
                throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                                 ": maximum score must be positive, got '" + std::string(cells[c]) +
                                 "'");
            }
            m.max_scores(static_cast<Eigen::Index>(c - 1)) = mx;
        }
        body = 2;
    }

    const std::size_t k = lines.size() - body;
    if (k < 2) {
        throw ParseError("need at least 2 examinee rows, got " + std::to_string(k));
    }

    m.scores.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
    m.examinee_ids.reserve(k);
    std::unordered_set<std::string> seen_examinees;
    for (std::size_t r = 0; r < k; ++r) {
        const auto& [row, cells] = lines[body + r];
        if (cells.size() != n + 1) {
            throw ParseError("row " + std::to_string(row) + ": has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(n + 1) +
                             " (examinee id plus one score per item)");
        }
        std::string id(cells[0]);
        if (id.empty()) {
            throw ParseError("row " + std::to_string(row) + ", column 1: empty examinee id");
        }
        if (!seen_examinees.insert(id).second) {
            throw ParseError("row " + std::to_string(row) + ", column 1: duplicate examinee id '" +
                             id + "'");
        }
        m.examinee_ids.push_back(std::move(id));
        for (std::size_t c = 1; c <= n; ++c) {
            const double v = parse_number(cells[c], row, c + 1);
            const double mx = m.max_scores(static_cast<Eigen::Index>(c - 1));
            if (v < 0.0 || v > mx) {
                throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(c + 1) +
                                 ": score " + std::string(cells[c]) + " outside [0, " +
                                 shortest(mx) + "] for item '" + m.item_ids[c - 1] + "'");
            }
            m.scores(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 1)) = v;
        }
    }

    validate(m);
    return m;
}

std::string write_score_csv(const ScoreMatrix& m) {
    std::string out;
    for (std::size_t c = 0; c < m.item_ids.size(); ++c) {
        if (c) out += ',';
        out += m.item_ids[c];
    }
    out += '\n';
    if ((m.max_scores.array() != 1.0).any()) {
        out += "#max";
        for (Eigen::Index c = 0; c < m.max_scores.size(); ++c) {
            out += ',';
            out += shortest(m.max_scores(c));
        }
        out += '\n';
    }
    for (Eigen::Index r = 0; r < m.scores.rows(); ++r) {
        out += m.examinee_ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < m.scores.cols(); ++c) {
            out += ',';
            out += shortest(m.scores(r, c));
        }
        out += '\n';
    }
    return out;
}

}  // namespace fairline
