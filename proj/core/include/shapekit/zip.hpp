// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace shapekit {

// Read-only view of a zip file's members (stored or deflate).
class ZipReader {
 public:
  explicit ZipReader(const std::filesystem::path& path);

  // Member names as stored, including any leading directory.
  std::vector<std::string> names() const;
  bool contains(const std::string& name) const;
  std::vector<std::uint8_t> read(const std::string& name) const;

 private:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t crc = 0;
    std::uint64_t compressed = 0;
    std::uint64_t uncompressed = 0;
    std::uint64_t local_offset = 0;
  };
  std::filesystem::path path_;
  std::vector<std::uint8_t> data_;
  std::map<std::string, Entry> entries_;
};

// Writes an uncompressed (stored) zip with the given members.
void write_zip(const std::filesystem::path& path,
               const std::map<std::string, std::vector<std::uint8_t>>& members);

}  // namespace shapekit
