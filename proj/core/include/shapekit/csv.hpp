// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shapekit {

// Plain comma-separated tables: no quoting, '#' comment lines and blank
// lines skipped.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

CsvTable parse_csv(std::string_view text, const std::string& source = "<csv>");
CsvTable read_csv(const std::filesystem::path& path);
std::string to_csv(const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);
double parse_double(std::string_view text, const std::string& context);
// Empty cell -> nullopt.
std::optional<double> parse_optional_double(std::string_view text, const std::string& context);

}  // namespace shapekit
