#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "fujita/errors.hpp"

// Deterministic CSV emission: header row, '.' decimal separator, 17
// significant digits (doubles round-trip exactly), LF line endings, byte
// identical output for identical inputs.

namespace fujita {

inline std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Quote a cell if it contains separators/quotes (RFC-4180 style).
inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string csv_render(const std::vector<std::string>& header,
                              const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto add_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(row[i]);
    }
    out += '\n';
  };
  add_row(header);
  for (const auto& r : rows) add_row(r);
  return out;
}

/// Write header + rows to path. Rows must be nonempty.
inline void emit_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) throw DomainError("emit_csv: no records");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("emit_csv: cannot open '" + path + "' for writing");
  out << csv_render(header, rows);
  if (!out) throw Error("emit_csv: write to '" + path + "' failed");
}

}  // namespace fujita
