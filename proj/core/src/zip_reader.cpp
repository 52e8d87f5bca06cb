// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/zip.hpp"

#include <cstring>
#include <fstream>

#include <zlib.h>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;

std::uint16_t rd16(const std::vector<std::uint8_t>& d, std::size_t off) {
  if (off + 2 > d.size()) throw Error(ErrorCode::parse_error, "truncated zip");
  return static_cast<std::uint16_t>(d[off] | (d[off + 1] << 8));
}

std::uint32_t rd32(const std::vector<std::uint8_t>& d, std::size_t off) {
  if (off + 4 > d.size()) throw Error(ErrorCode::parse_error, "truncated zip");
  return static_cast<std::uint32_t>(d[off]) | (static_cast<std::uint32_t>(d[off + 1]) << 8) |
         (static_cast<std::uint32_t>(d[off + 2]) << 16) |
         (static_cast<std::uint32_t>(d[off + 3]) << 24);
}

void wr16(std::vector<std::uint8_t>& d, std::uint16_t v) {
  d.push_back(static_cast<std::uint8_t>(v & 0xff));
  d.push_back(static_cast<std::uint8_t>(v >> 8));
}

void wr32(std::vector<std::uint8_t>& d, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) d.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

}  // namespace

ZipReader::ZipReader(const std::filesystem::path& path) : path_(path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open zip", path.string());
  data_.assign(std::istreambuf_iterator<char>(in), {});
  if (data_.size() < 22) throw Error(ErrorCode::parse_error, "file too small to be a zip", path.string());

  std::size_t end = std::string::npos;
  const std::size_t lowest = data_.size() > 22 + 65535 ? data_.size() - 22 - 65535 : 0;
  for (std::size_t off = data_.size() - 22 + 1; off-- > lowest;) {
    if (rd32(data_, off) == kEndSig) {
      end = off;
      break;
    }
  }
  if (end == std::string::npos) throw Error(ErrorCode::parse_error, "zip end record not found", path.string());

  const std::uint16_t count = rd16(data_, end + 10);
  std::size_t off = rd32(data_, end + 16);
  for (std::uint16_t i = 0; i < count; ++i) {
    if (rd32(data_, off) != kCentralSig) throw Error(ErrorCode::parse_error, "bad zip central directory", path.string());
    Entry e;
    e.method = rd16(data_, off + 10);
    e.crc = rd32(data_, off + 16);
    e.compressed = rd32(data_, off + 20);
    e.uncompressed = rd32(data_, off + 24);
    const std::uint16_t name_len = rd16(data_, off + 28);
    const std::uint16_t extra_len = rd16(data_, off + 30);
    const std::uint16_t comment_len = rd16(data_, off + 32);
    e.local_offset = rd32(data_, off + 42);
    if (off + 46 + name_len > data_.size()) throw Error(ErrorCode::parse_error, "truncated zip", path.string());
    std::string name(reinterpret_cast<const char*>(&data_[off + 46]), name_len);
    entries_.emplace(std::move(name), e);
    off += 46u + name_len + extra_len + comment_len;
  }
}

std::vector<std::string> ZipReader::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

bool ZipReader::contains(const std::string& name) const { return entries_.count(name) > 0; }

std::vector<std::uint8_t> ZipReader::read(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::io_error, "zip member not found", name);
  const Entry& e = it->second;
  if (rd32(data_, e.local_offset) != kLocalSig) throw Error(ErrorCode::parse_error, "bad zip local header", name);
  const std::size_t start = e.local_offset + 30 + rd16(data_, e.local_offset + 26) +
                            rd16(data_, e.local_offset + 28);
  if (start + e.compressed > data_.size()) throw Error(ErrorCode::parse_error, "truncated zip member", name);

  std::vector<std::uint8_t> out(e.uncompressed);
  if (e.method == 0) {
    std::memcpy(out.data(), &data_[start], e.uncompressed);
  } else if (e.method == 8) {
    z_stream zs{};
    if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) throw Error(ErrorCode::io_error, "inflateInit failed", name);
    zs.next_in = const_cast<Bytef*>(&data_[start]);
    zs.avail_in = static_cast<uInt>(e.compressed);
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END) throw Error(ErrorCode::parse_error, "deflate stream corrupt", name);
  } else {
    throw Error(ErrorCode::unsupported, "zip compression method " + std::to_string(e.method), name);
  }
  const auto crc = static_cast<std::uint32_t>(crc32(0L, out.data(), static_cast<uInt>(out.size())));
  if (crc != e.crc) throw Error(ErrorCode::parse_error, "zip member CRC mismatch", name);
  return out;
}

void write_zip(const std::filesystem::path& path,
               const std::map<std::string, std::vector<std::uint8_t>>& members) {
  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> central;
  for (const auto& [name, bytes] : members) {
    const auto crc = static_cast<std::uint32_t>(crc32(0L, bytes.data(), static_cast<uInt>(bytes.size())));
    const auto offset = static_cast<std::uint32_t>(out.size());
    const auto size = static_cast<std::uint32_t>(bytes.size());
    const auto nlen = static_cast<std::uint16_t>(name.size());

    wr32(out, kLocalSig);
    wr16(out, 20); wr16(out, 0); wr16(out, 0); wr16(out, 0); wr16(out, 0x21);
    wr32(out, crc); wr32(out, size); wr32(out, size);
    wr16(out, nlen); wr16(out, 0);
    out.insert(out.end(), name.begin(), name.end());
    out.insert(out.end(), bytes.begin(), bytes.end());

    wr32(central, kCentralSig);
    wr16(central, 20); wr16(central, 20); wr16(central, 0); wr16(central, 0);
    wr16(central, 0); wr16(central, 0x21);
    wr32(central, crc); wr32(central, size); wr32(central, size);
    wr16(central, nlen); wr16(central, 0); wr16(central, 0); wr16(central, 0); wr16(central, 0);
    wr32(central, 0); wr32(central, offset);
    central.insert(central.end(), name.begin(), name.end());
  }
  const auto cd_offset = static_cast<std::uint32_t>(out.size());
  const auto cd_size = static_cast<std::uint32_t>(central.size());
  out.insert(out.end(), central.begin(), central.end());
  wr32(out, kEndSig);
  wr16(out, 0); wr16(out, 0);
  wr16(out, static_cast<std::uint16_t>(members.size()));
  wr16(out, static_cast<std::uint16_t>(members.size()));
  wr32(out, cd_size); wr32(out, cd_offset); wr16(out, 0);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot write zip", path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

}  // namespace shapekit
