// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "shapekit/error.hpp"

namespace shapekit::detail {

template <typename T>
T byteswap_value(T v) {
  std::uint8_t b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  std::memcpy(&v, b, sizeof(T));
  return v;
}

// Decodes a little-endian array of T.
template <typename T>
std::vector<T> decode_le(std::span<const std::uint8_t> bytes, const std::string& what) {
  if (bytes.size() % sizeof(T) != 0) {
    throw Error(ErrorCode::dimension_mismatch,
                "buffer size " + std::to_string(bytes.size()) + " is not a multiple of " +
                    std::to_string(sizeof(T)),
                what);
  }
  std::vector<T> out(bytes.size() / sizeof(T));
  std::memcpy(out.data(), bytes.data(), bytes.size());
  if constexpr (std::endian::native == std::endian::big) {
    for (auto& v : out) v = byteswap_value(v);
  }
  return out;
}

template <typename T>
std::vector<std::uint8_t> encode_le(std::span<const T> values) {
  std::vector<std::uint8_t> out(values.size() * sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      const T v = byteswap_value(values[i]);
      std::memcpy(out.data() + i * sizeof(T), &v, sizeof(T));
    }
  } else {
    std::memcpy(out.data(), values.data(), out.size());
  }
  return out;
}

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open file", path.string());
  return {std::istreambuf_iterator<char>(in), {}};
}

inline std::string read_text(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

inline void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io_error, "cannot write file", path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace shapekit::detail
