#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "romshaper/eval/landscape.h"
#include "romshaper/eval/rollout.h"
#include "romshaper/eval/training.h"

namespace romshaper {

/// Quotes a field when it contains a comma, quote or line break.
std::string CsvEscape(std::string_view field);
void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields);
/// Shortest decimal form that parses back to the same double.
std::string CsvNumber(double v);

/// tick, t, q0..q6, v0..v6, u0..u3, fsm_mode, stride, h, r
void WriteTraceCsv(std::ostream& out, const RolloutTrace& trace);

void WriteHistoryHeader(std::ostream& out);
void WriteHistoryRow(std::ostream& out, const IterationLog& log);

/// stride, incline, cost_a, cost_b, ratio, label (missing values empty)
void WriteLandscapeCsv(std::ostream& out, const LandscapeGrid& grid);

/// RFC-4180 style parse of a whole document, used by tests and the resume
/// path.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace romshaper
