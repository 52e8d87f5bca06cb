// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/model_archive.hpp"

#include <functional>
#include <map>
#include <optional>

#include <json.hpp>

#include "binary_io.hpp"
#include "shapekit/error.hpp"
#include "shapekit/zip.hpp"

namespace shapekit {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kFormat = "shapekit-body-model";
constexpr int kVersion = 1;

using Fetch = std::function<std::vector<std::uint8_t>(const std::string&)>;

[[noreturn]] void manifest_error(const std::string& message, const std::string& path) {
  throw Error(ErrorCode::malformed_manifest, message, "manifest." + path);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) manifest_error("missing field", path + key);
  return obj.at(key);
}

std::uint64_t require_uint(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require(obj, key, path);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    manifest_error("expected a non-negative integer", path + key);
  }
  return v.get<std::uint64_t>();
}

struct BufferRef {
  std::string file;
  std::string dtype;
  std::vector<std::uint64_t> shape;
};

BufferRef buffer_ref(const json& buffers, const std::string& name) {
  const std::string path = "buffers." + name + ".";
  const json& b = require(buffers, name, "buffers.");
  BufferRef ref;
  const json& file = require(b, "file", path);
  const json& dtype = require(b, "dtype", path);
  const json& shape = require(b, "shape", path);
  if (!file.is_string()) manifest_error("expected a string", path + "file");
  if (!dtype.is_string()) manifest_error("expected a string", path + "dtype");
  if (!shape.is_array()) manifest_error("expected an array", path + "shape");
  ref.file = file.get<std::string>();
  ref.dtype = dtype.get<std::string>();
  for (const auto& d : shape) {
    if (!d.is_number_integer() || d.get<std::int64_t>() < 0) manifest_error("bad dimension", path + "shape");
    ref.shape.push_back(d.get<std::uint64_t>());
  }
  return ref;
}

void expect_shape(const BufferRef& ref, const std::vector<std::uint64_t>& expected,
                  const std::string& name) {
  if (ref.shape != expected) {
    std::string want = "[";
    for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + std::to_string(expected[i]);
    want += "]";
    throw Error(ErrorCode::dimension_mismatch, "buffer shape does not match, expected " + want,
                "manifest.buffers." + name + ".shape");
  }
}

template <typename T>
std::vector<T> load_buffer(const Fetch& fetch, const BufferRef& ref, const std::string& name,
                           const char* dtype) {
  if (ref.dtype != dtype) {
    manifest_error(std::string("expected dtype ") + dtype, "buffers." + name + ".dtype");
  }
  std::uint64_t count = 1;
  for (auto d : ref.shape) count *= d;
  auto values = detail::decode_le<T>(fetch(ref.file), "manifest.buffers." + name);
  if (values.size() != count) {
    throw Error(ErrorCode::dimension_mismatch,
                "buffer holds " + std::to_string(values.size()) + " values, shape implies " +
                    std::to_string(count),
                "manifest.buffers." + name);
  }
  return values;
}

BodyModel parse_archive(const json& manifest, const Fetch& fetch) {
  if (!manifest.is_object()) manifest_error("manifest is not a JSON object", "");
  if (manifest.contains("format") && manifest["format"] != kFormat) {
    manifest_error("unknown archive format", "format");
  }
  if (manifest.contains("version") && manifest["version"] != kVersion) {
    manifest_error("unsupported archive version", "version");
  }

  const std::string up = manifest.value("up_axis", std::string("y"));
  if (up != "y" && up != "+y") {
    throw Error(ErrorCode::unsupported,
                "archive declares up axis '" + up + "'; only y-up models are accepted",
                "manifest.up_axis");
  }

  const auto n = require_uint(manifest, "num_vertices", "");
  const auto f = require_uint(manifest, "num_triangles", "");
  const auto b = require_uint(manifest, "num_betas", "");
  Gender gender = Gender::neutral;
  if (manifest.contains("gender")) {
    try {
      gender = parse_gender(manifest["gender"].get<std::string>());
    } catch (const std::exception&) {
      manifest_error("unknown gender", "gender");
    }
  }

  const json& lm = require(manifest, "landmarks", "");
  LandmarkSet landmarks;
  const std::pair<const char*, std::uint32_t*> slots[] = {
      {"head_top", &landmarks.head_top}, {"left_heel", &landmarks.left_heel},
      {"chest", &landmarks.chest},       {"waist", &landmarks.waist},
      {"hip", &landmarks.hip}};
  for (const auto& [name, slot] : slots) {
    if (!lm.is_object() || !lm.contains(name)) {
      throw Error(ErrorCode::missing_landmark, std::string("landmark '") + name + "' missing",
                  std::string("manifest.landmarks.") + name);
    }
    const json& v = lm.at(name);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw Error(ErrorCode::missing_landmark, "landmark index must be a non-negative integer",
                  std::string("manifest.landmarks.") + name);
    }
    *slot = v.get<std::uint32_t>();
  }

  const json& buffers = require(manifest, "buffers", "");
  const BufferRef vref = buffer_ref(buffers, "template_vertices");
  const BufferRef tref = buffer_ref(buffers, "triangles");
  const BufferRef sref = buffer_ref(buffers, "shape_basis");
  expect_shape(vref, {n, 3}, "template_vertices");
  expect_shape(tref, {f, 3}, "triangles");
  expect_shape(sref, {n, 3, b}, "shape_basis");

  const auto vdata = load_buffer<float>(fetch, vref, "template_vertices", "float32");
  const auto tdata = load_buffer<std::uint32_t>(fetch, tref, "triangles", "uint32");
  const auto sdata = load_buffer<float>(fetch, sref, "shape_basis", "float32");

  Vertices verts(static_cast<Eigen::Index>(n), 3);
  for (std::size_t i = 0; i < vdata.size(); ++i) verts(static_cast<Eigen::Index>(i / 3), static_cast<Eigen::Index>(i % 3)) = vdata[i];
  std::vector<Triangle> tris(f);
  for (std::size_t i = 0; i < f; ++i) tris[i] = {tdata[3 * i], tdata[3 * i + 1], tdata[3 * i + 2]};
  Eigen::MatrixXd basis(static_cast<Eigen::Index>(3 * n), static_cast<Eigen::Index>(b));
  for (std::size_t i = 0; i < sdata.size(); ++i) {
    basis(static_cast<Eigen::Index>(i / b), static_cast<Eigen::Index>(i % b)) = sdata[i];
  }

  TriangleMesh mesh;
  try {
    mesh = TriangleMesh(std::move(verts), std::move(tris));
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), "manifest.buffers." + e.context());
  }

  BodyModel model(std::move(mesh), std::move(basis), gender, landmarks);

  std::vector<PassthroughBuffer> extra;
  for (const auto& [name, desc] : buffers.items()) {
    if (name == "template_vertices" || name == "triangles" || name == "shape_basis") continue;
    PassthroughBuffer pb;
    pb.name = name;
    pb.descriptor_json = desc.dump();
    if (desc.contains("file") && desc["file"].is_string()) pb.bytes = fetch(desc["file"].get<std::string>());
    extra.push_back(std::move(pb));
  }
  model.set_passthrough_buffers(std::move(extra));
  if (manifest.contains("metadata")) model.set_metadata_json(manifest["metadata"].dump());
  return model;
}

json parse_manifest(const std::vector<std::uint8_t>& bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_manifest, std::string("manifest.json is not valid JSON: ") + e.what(),
                "manifest");
  }
}

std::map<std::string, std::vector<std::uint8_t>> archive_members(const BodyModel& model) {
  const auto& mesh = model.template_mesh();
  const std::size_t n = mesh.num_vertices();
  const std::size_t b = static_cast<std::size_t>(model.num_betas());

  std::vector<float> v(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) v[3 * i + c] = static_cast<float>(mesh.vertices()(static_cast<Eigen::Index>(i), c));
  }
  std::vector<std::uint32_t> t;
  t.reserve(3 * mesh.num_triangles());
  for (const auto& tri : mesh.triangles()) t.insert(t.end(), tri.begin(), tri.end());
  std::vector<float> s(3 * n * b);
  const auto& basis = model.shape_basis();
  for (std::size_t r = 0; r < 3 * n; ++r) {
    for (std::size_t k = 0; k < b; ++k) s[r * b + k] = static_cast<float>(basis(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)));
  }

  json manifest;
  manifest["format"] = kFormat;
  manifest["version"] = kVersion;
  manifest["gender"] = std::string(to_string(model.gender()));
  manifest["up_axis"] = "y";
  manifest["num_vertices"] = n;
  manifest["num_triangles"] = mesh.num_triangles();
  manifest["num_betas"] = b;
  const auto& lm = model.landmarks();
  manifest["landmarks"] = {{"head_top", lm.head_top}, {"left_heel", lm.left_heel},
                           {"chest", lm.chest},       {"waist", lm.waist},
                           {"hip", lm.hip}};
  json buffers;
  buffers["template_vertices"] = {{"file", "template_vertices.bin"}, {"dtype", "float32"}, {"shape", {n, 3}}};
  buffers["triangles"] = {{"file", "triangles.bin"}, {"dtype", "uint32"}, {"shape", {mesh.num_triangles(), 3}}};
  buffers["shape_basis"] = {{"file", "shape_basis.bin"}, {"dtype", "float32"}, {"shape", {n, 3, b}}};

  std::map<std::string, std::vector<std::uint8_t>> members;
  members["template_vertices.bin"] = detail::encode_le<float>(v);
  members["triangles.bin"] = detail::encode_le<std::uint32_t>(t);
  members["shape_basis.bin"] = detail::encode_le<float>(s);
  for (const auto& pb : model.passthrough_buffers()) {
    json desc = json::parse(pb.descriptor_json);
    buffers[pb.name] = desc;
    if (desc.contains("file") && desc["file"].is_string()) members[desc["file"].get<std::string>()] = pb.bytes;
  }
  manifest["buffers"] = buffers;
  manifest["metadata"] = json::parse(model.metadata_json());
  const std::string text = manifest.dump(2) + "\n";
  members["manifest.json"] = std::vector<std::uint8_t>(text.begin(), text.end());
  return members;
}

}  // namespace

BodyModel load_model(const fs::path& archive_path) {
  if (fs::is_directory(archive_path)) {
    const fs::path manifest_path = archive_path / "manifest.json";
    if (!fs::exists(manifest_path)) {
      throw Error(ErrorCode::io_error, "archive has no manifest.json", archive_path.string());
    }
    const json manifest = parse_manifest(detail::read_file(manifest_path));
    return parse_archive(manifest, [&](const std::string& file) {
      return detail::read_file(archive_path / file);
    });
  }
  if (!fs::exists(archive_path)) {
    throw Error(ErrorCode::io_error, "model archive not found", archive_path.string());
  }
  ZipReader zip(archive_path);
  std::string prefix;
  bool found = zip.contains("manifest.json");
  if (!found) {
    for (const auto& name : zip.names()) {
      const std::string suffix = "/manifest.json";
      if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0 &&
          name.find('/') == name.size() - suffix.size()) {
        prefix = name.substr(0, name.size() - suffix.size() + 1);
        found = true;
        break;
      }
    }
  }
  if (!found) throw Error(ErrorCode::io_error, "zip archive has no manifest.json", archive_path.string());
  const json manifest = parse_manifest(zip.read(prefix + "manifest.json"));
  return parse_archive(manifest, [&](const std::string& file) { return zip.read(prefix + file); });
}

void save_model(const BodyModel& model, const fs::path& directory) {
  fs::create_directories(directory);
  for (const auto& [name, bytes] : archive_members(model)) detail::write_file(directory / name, bytes);
}

void save_model_zip(const BodyModel& model, const fs::path& zip_path) {
  write_zip(zip_path, archive_members(model));
}

}  // namespace shapekit
