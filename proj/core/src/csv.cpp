// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/csv.hpp"

#include <charconv>
#include <cmath>

#include "binary_io.hpp"
#include "shapekit/error.hpp"

namespace shapekit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(std::string_view name) const {
  if (auto c = column(name)) return *c;
  throw Error(ErrorCode::parse_error, "missing CSV column '" + std::string(name) + "'", std::string(name));
}

CsvTable parse_csv(std::string_view text, const std::string& source) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line.empty() || line.front() == '#') {
      if (eol == text.size()) break;
      continue;
    }
    auto cells = split(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      if (cells.size() != table.header.size()) {
        throw Error(ErrorCode::parse_error,
                    "row has " + std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(table.header.size()),
                    source + ":" + std::to_string(line_no));
      }
      table.rows.push_back(std::move(cells));
    }
    if (eol == text.size()) break;
  }
  if (!have_header) throw Error(ErrorCode::parse_error, "CSV has no header", source);
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  return parse_csv(detail::read_text(path), path.string());
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  detail::write_text(path, to_csv(table));
}

std::string format_double(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
  text = trim(text);
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::parse_error, "not a number: '" + std::string(text) + "'", context);
  }
  return value;
}

std::optional<double> parse_optional_double(std::string_view text, const std::string& context) {
  text = trim(text);
  if (text.empty() || text == "nan" || text == "NA") return std::nullopt;
  return parse_double(text, context);
}

}  // namespace shapekit
