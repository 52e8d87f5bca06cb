// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "binary_io.hpp"
#include "shapekit/csv.hpp"
#include "shapekit/error.hpp"

namespace shapekit {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

Vertices to_vertices(const std::vector<double>& xyz) {
  Vertices v(static_cast<Eigen::Index>(xyz.size() / 3), 3);
  for (std::size_t i = 0; i < xyz.size(); ++i) v(static_cast<Eigen::Index>(i / 3), static_cast<Eigen::Index>(i % 3)) = xyz[i];
  return v;
}

void fan(const std::vector<std::int64_t>& poly, std::vector<Triangle>& out, const std::string& where) {
  if (poly.size() < 3) throw Error(ErrorCode::parse_error, "face with fewer than 3 vertices", where);
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    out.push_back({static_cast<std::uint32_t>(poly[0]), static_cast<std::uint32_t>(poly[k]),
                   static_cast<std::uint32_t>(poly[k + 1])});
  }
}

}  // namespace

TriangleMesh read_obj(const std::filesystem::path& path) {
  std::istringstream in(detail::read_text(path));
  std::vector<double> xyz;
  std::vector<Triangle> tris;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      std::string tok;
      for (int k = 0; k < 3; ++k) {
        if (!(ls >> tok)) throw Error(ErrorCode::parse_error, "vertex needs 3 coordinates", where);
        xyz.push_back(parse_double(tok, where));
      }
    } else if (tag == "f") {
      std::vector<std::int64_t> poly;
      std::string tok;
      const auto nv = static_cast<std::int64_t>(xyz.size() / 3);
      while (ls >> tok) {
        const std::string head = tok.substr(0, tok.find('/'));
        std::int64_t idx = 0;
        const auto [p, ec] = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (ec != std::errc() || p != head.data() + head.size() || idx == 0) {
          throw Error(ErrorCode::parse_error, "bad face index '" + tok + "'", where);
        }
        idx = idx > 0 ? idx - 1 : nv + idx;
        if (idx < 0 || idx >= nv) throw Error(ErrorCode::parse_error, "face index out of range", where);
        poly.push_back(idx);
      }
      fan(poly, tris, where);
    }
  }
  return TriangleMesh(to_vertices(xyz), std::move(tris));
}

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::string out;
  const auto& v = mesh.vertices();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    out += "v " + format_double(v(i, 0)) + " " + format_double(v(i, 1)) + " " + format_double(v(i, 2)) + "\n";
  }
  for (const auto& t : mesh.triangles()) {
    out += "f " + std::to_string(t[0] + 1) + " " + std::to_string(t[1] + 1) + " " + std::to_string(t[2] + 1) + "\n";
  }
  detail::write_text(path, out);
}

namespace {

enum class PlyType { i8, u8, i16, u16, i32, u32, f32, f64 };

PlyType parse_ply_type(const std::string& s, const std::string& where) {
  if (s == "char" || s == "int8") return PlyType::i8;
  if (s == "uchar" || s == "uint8") return PlyType::u8;
  if (s == "short" || s == "int16") return PlyType::i16;
  if (s == "ushort" || s == "uint16") return PlyType::u16;
  if (s == "int" || s == "int32") return PlyType::i32;
  if (s == "uint" || s == "uint32") return PlyType::u32;
  if (s == "float" || s == "float32") return PlyType::f32;
  if (s == "double" || s == "float64") return PlyType::f64;
  throw Error(ErrorCode::parse_error, "unknown PLY type '" + s + "'", where);
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::i8:
    case PlyType::u8:
      return 1;
    case PlyType::i16:
    case PlyType::u16:
      return 2;
    case PlyType::i32:
    case PlyType::u32:
    case PlyType::f32:
      return 4;
    case PlyType::f64:
      return 8;
  }
  return 0;
}

struct PlyProperty {
  std::string name;
  PlyType type = PlyType::f32;
  bool is_list = false;
  PlyType count_type = PlyType::u8;
};

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<PlyProperty> props;
};

class BinaryCursor {
 public:
  BinaryCursor(const std::vector<std::uint8_t>& bytes, std::size_t pos, std::string where)
      : bytes_(bytes), pos_(pos), where_(std::move(where)) {}

  double read(PlyType t) {
    const std::size_t n = ply_size(t);
    if (pos_ + n > bytes_.size()) throw Error(ErrorCode::parse_error, "PLY body truncated", where_);
    auto span = std::span(bytes_).subspan(pos_, n);
    pos_ += n;
    switch (t) {
      case PlyType::i8: return detail::decode_le<std::int8_t>(span, where_)[0];
      case PlyType::u8: return detail::decode_le<std::uint8_t>(span, where_)[0];
      case PlyType::i16: return detail::decode_le<std::int16_t>(span, where_)[0];
      case PlyType::u16: return detail::decode_le<std::uint16_t>(span, where_)[0];
      case PlyType::i32: return detail::decode_le<std::int32_t>(span, where_)[0];
      case PlyType::u32: return detail::decode_le<std::uint32_t>(span, where_)[0];
      case PlyType::f32: return detail::decode_le<float>(span, where_)[0];
      case PlyType::f64: return detail::decode_le<double>(span, where_)[0];
    }
    return 0.0;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_;
  std::string where_;
};

}  // namespace

TriangleMesh read_ply(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  const std::string where = path.string();
  const std::string marker = "end_header";
  const std::string text(bytes.begin(), bytes.end());
  const auto end = text.find(marker);
  if (text.rfind("ply", 0) != 0 || end == std::string::npos) {
    throw Error(ErrorCode::parse_error, "missing PLY header", where);
  }
  std::size_t body = text.find('\n', end);
  if (body == std::string::npos) throw Error(ErrorCode::parse_error, "PLY header not terminated", where);
  ++body;

  std::istringstream header(text.substr(0, end));
  std::string line;
  std::string format;
  std::vector<PlyElement> elements;
  while (std::getline(header, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "format") {
      ls >> format;
    } else if (tag == "element") {
      PlyElement e;
      ls >> e.name >> e.count;
      elements.push_back(e);
    } else if (tag == "property") {
      if (elements.empty()) throw Error(ErrorCode::parse_error, "property before element", where);
      PlyProperty p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string ct, it;
        ls >> ct >> it;
        p.is_list = true;
        p.count_type = parse_ply_type(ct, where);
        p.type = parse_ply_type(it, where);
      } else {
        p.type = parse_ply_type(type, where);
      }
      ls >> p.name;
      elements.back().props.push_back(p);
    }
  }
  if (format != "ascii" && format != "binary_little_endian") {
    throw Error(ErrorCode::unsupported, "PLY format '" + format + "' not supported", where);
  }

  std::vector<double> xyz;
  std::vector<Triangle> tris;
  std::istringstream ascii(format == "ascii" ? text.substr(body) : std::string());
  BinaryCursor cursor(bytes, body, where);
  auto next = [&](PlyType t) -> double {
    if (format == "ascii") {
      std::string tok;
      if (!(ascii >> tok)) throw Error(ErrorCode::parse_error, "PLY body truncated", where);
      return parse_double(tok, where);
    }
    return cursor.read(t);
  };

  for (const auto& e : elements) {
    for (std::size_t i = 0; i < e.count; ++i) {
      double pos[3] = {0, 0, 0};
      int seen = 0;
      std::vector<std::int64_t> poly;
      for (const auto& p : e.props) {
        if (p.is_list) {
          const auto n = static_cast<std::size_t>(next(p.count_type));
          std::vector<std::int64_t> items(n);
          for (auto& it : items) it = static_cast<std::int64_t>(next(p.type));
          if (e.name == "face" && (p.name == "vertex_indices" || p.name == "vertex_index")) poly = std::move(items);
        } else {
          const double val = next(p.type);
          if (e.name == "vertex") {
            if (p.name == "x") pos[0] = val, seen |= 1;
            if (p.name == "y") pos[1] = val, seen |= 2;
            if (p.name == "z") pos[2] = val, seen |= 4;
          }
        }
      }
      if (e.name == "vertex") {
        if (seen != 7) throw Error(ErrorCode::parse_error, "vertex element lacks x, y or z", where);
        xyz.insert(xyz.end(), pos, pos + 3);
      } else if (e.name == "face") {
        for (auto idx : poly) {
          if (idx < 0 || static_cast<std::size_t>(idx) >= xyz.size() / 3) {
            throw Error(ErrorCode::parse_error, "face index out of range", where + ": face " + std::to_string(i));
          }
        }
        fan(poly, tris, where + ": face " + std::to_string(i));
      }
    }
  }
  return TriangleMesh(to_vertices(xyz), std::move(tris));
}

void write_ply(const TriangleMesh& mesh, const std::filesystem::path& path, PlyEncoding encoding) {
  const auto& v = mesh.vertices();
  std::string head = "ply\nformat ";
  head += encoding == PlyEncoding::ascii ? "ascii" : "binary_little_endian";
  head += " 1.0\nelement vertex " + std::to_string(v.rows()) +
          "\nproperty double x\nproperty double y\nproperty double z\nelement face " +
          std::to_string(mesh.num_triangles()) + "\nproperty list uchar uint vertex_indices\nend_header\n";
  std::vector<std::uint8_t> out(head.begin(), head.end());
  if (encoding == PlyEncoding::ascii) {
    std::string body;
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      body += format_double(v(i, 0)) + " " + format_double(v(i, 1)) + " " + format_double(v(i, 2)) + "\n";
    }
    for (const auto& t : mesh.triangles()) {
      body += "3 " + std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
    }
    out.insert(out.end(), body.begin(), body.end());
  } else {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double p[3] = {v(i, 0), v(i, 1), v(i, 2)};
      const auto b = detail::encode_le<double>(p);
      out.insert(out.end(), b.begin(), b.end());
    }
    for (const auto& t : mesh.triangles()) {
      out.push_back(3);
      const auto b = detail::encode_le<std::uint32_t>(t);
      out.insert(out.end(), b.begin(), b.end());
    }
  }
  detail::write_file(path, out);
}

TriangleMesh read_mesh(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".obj") return read_obj(path);
  if (ext == ".ply") return read_ply(path);
  throw Error(ErrorCode::unsupported, "unknown mesh extension '" + ext + "'", path.string());
}

void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".obj") return write_obj(mesh, path);
  if (ext == ".ply") return write_ply(mesh, path);
  throw Error(ErrorCode::unsupported, "unknown mesh extension '" + ext + "'", path.string());
}

}  // namespace shapekit
