#pragma once

#include <string>
#include <string_view>

#include "fairline/score_matrix.hpp"

namespace fairline {

/// Parses a comma-separated score document.
///
/// Layout:
///   row 1            header of item ids (N cells, N >= 2)
///   row 2 (optional) `#max` tag followed by N per-item maxima; defaults to 1
///   remaining rows   examinee id followed by N raw scores
///
/// Cells are whitespace-trimmed, scores use `.` as decimal point. Ragged
/// rows, non-numeric cells, scores above their item maximum, duplicate ids
/// and undersized matrices raise ParseError with 1-based row/column
/// positions. Missing cells are rejected, never imputed.
ScoreMatrix parse_score_csv(std::string_view text);

/// Inverse of parse_score_csv. Emits a `#max` row only when some maximum
/// differs from 1. Numbers are written in shortest round-trip form, so
/// parse(write(m)) reproduces m exactly.
std::string write_score_csv(const ScoreMatrix& m);

}  // namespace fairline
