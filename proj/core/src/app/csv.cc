#include "romshaper/app/csv.h"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace romshaper {

std::string CsvEscape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void WriteCsvRow(std::ostream& out, const std::vector<std::string>& fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out << ',';
    out << CsvEscape(fields[i]);
  }
  out << "\r\n";
}

std::string CsvNumber(double v) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void WriteTraceCsv(std::ostream& out, const RolloutTrace& trace) {
  std::vector<std::string> header = {"tick", "t"};
  for (int i = 0; i < kNq; ++i) header.push_back("q" + std::to_string(i));
  for (int i = 0; i < kNq; ++i) header.push_back("v" + std::to_string(i));
  for (int i = 0; i < kNu; ++i) header.push_back("u" + std::to_string(i));
  for (const char* h : {"fsm_mode", "stride", "h", "r"}) header.push_back(h);
  WriteCsvRow(out, header);
  for (const TickRecord& t : trace.ticks) {
    std::vector<std::string> row = {std::to_string(t.tick), CsvNumber(t.t)};
    for (int i = 0; i < kNq; ++i) row.push_back(CsvNumber(t.x.q(i)));
    for (int i = 0; i < kNq; ++i) row.push_back(CsvNumber(t.x.v(i)));
    for (int i = 0; i < kNu; ++i) row.push_back(CsvNumber(t.u.u(i)));
    row.push_back(ToString(t.fsm.mode));
    row.push_back(CsvNumber(t.achieved.stride));
    row.push_back(CsvNumber(t.h));
    row.push_back(CsvNumber(t.r));
    WriteCsvRow(out, row);
  }
}

void WriteHistoryHeader(std::ostream& out) {
  WriteCsvRow(out, {"iteration", "best_return", "mean_return", "grid_size",
                    "sigma"});
}

void WriteHistoryRow(std::ostream& out, const IterationLog& log) {
  WriteCsvRow(out, {std::to_string(log.iteration), CsvNumber(log.best_return),
                    CsvNumber(log.mean_return), std::to_string(log.grid_size),
                    CsvNumber(log.sigma)});
}

void WriteLandscapeCsv(std::ostream& out, const LandscapeGrid& grid) {
  WriteCsvRow(out, {"stride", "incline", "cost_a", "cost_b", "ratio", "label"});
  auto opt = [](const std::optional<double>& v) {
    return v ? CsvNumber(*v) : std::string();
  };
  for (const LandscapeCell& c : grid.cells) {
    WriteCsvRow(out, {CsvNumber(c.task.stride), CsvNumber(c.task.incline),
                      opt(c.cost_a), opt(c.cost_b), opt(c.ratio),
                      ToString(c.label)});
  }
}

std::vector<std::vector<std::string>> ParseCsv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  size_t i = 0;
  auto end_row = [&] {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
    row.clear();
    field.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field += c;
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw std::invalid_argument("ParseCsv: unterminated quote");
  if (field_started || !row.empty()) end_row();
  return rows;
}

}  // namespace romshaper
