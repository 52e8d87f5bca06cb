// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/mesh.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

MeshTopology analyze(std::size_t num_vertices, std::vector<Triangle> triangles) {
  MeshTopology topo;
  topo.num_vertices = num_vertices;

  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    for (auto idx : tri) {
      if (idx >= num_vertices) {
        throw Error(ErrorCode::invalid_mesh,
                    "triangle references vertex " + std::to_string(idx) + " but mesh has " +
                        std::to_string(num_vertices) + " vertices",
                    "triangles[" + std::to_string(t) + "]");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorCode::invalid_mesh, "degenerate triangle with repeated vertex index",
                  "triangles[" + std::to_string(t) + "]");
    }
  }

  // (lo, hi) -> (count lo->hi, count hi->lo)
  std::vector<std::pair<std::uint64_t, int>> directed;
  directed.reserve(triangles.size() * 3);
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      const std::uint32_t a = tri[k];
      const std::uint32_t b = tri[(k + 1) % 3];
      const std::uint32_t lo = std::min(a, b);
      const std::uint32_t hi = std::max(a, b);
      directed.emplace_back((std::uint64_t{lo} << 32) | hi, a == lo ? 1 : -1);
    }
  }
  std::sort(directed.begin(), directed.end());

  topo.closed = true;
  topo.consistently_oriented = true;
  for (std::size_t i = 0; i < directed.size();) {
    std::size_t j = i;
    int incident = 0;
    int balance = 0;
    while (j < directed.size() && directed[j].first == directed[i].first) {
      ++incident;
      balance += directed[j].second;
      ++j;
    }
    const Edge edge{static_cast<std::uint32_t>(directed[i].first >> 32),
                    static_cast<std::uint32_t>(directed[i].first & 0xffffffffu)};
    if (incident < 2 && topo.closed) {
      topo.closed = false;
      topo.boundary_edge = edge;
    }
    if (balance != 0 && topo.consistently_oriented) {
      topo.consistently_oriented = false;
      topo.misoriented_edge = edge;
    }
    i = j;
  }
  topo.triangles = std::move(triangles);
  return topo;
}

}  // namespace

TriangleMesh::TriangleMesh(Vertices vertices, std::vector<Triangle> triangles)
    : vertices_(std::move(vertices)),
      topology_(std::make_shared<MeshTopology>(
          analyze(static_cast<std::size_t>(vertices_.rows()), std::move(triangles)))) {}

TriangleMesh TriangleMesh::with_vertices(Vertices vertices) const {
  if (vertices.rows() != vertices_.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "vertex count " + std::to_string(vertices.rows()) + " does not match topology (" +
                    std::to_string(vertices_.rows()) + ")");
  }
  TriangleMesh out;
  out.vertices_ = std::move(vertices);
  out.topology_ = topology_;
  return out;
}

std::uint64_t TriangleMesh::topology_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 0x100000001b3ULL;
    }
  };
  feed(num_vertices());
  for (const auto& tri : triangles()) {
    for (auto idx : tri) feed(idx);
  }
  return h;
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

std::vector<double> triangle_areas(const TriangleMesh& mesh) {
  std::vector<double> areas;
  areas.reserve(mesh.num_triangles());
  for (const auto& t : mesh.triangles()) {
    areas.push_back(triangle_area(mesh.vertex(t[0]), mesh.vertex(t[1]), mesh.vertex(t[2])));
  }
  return areas;
}

double surface_area(const TriangleMesh& mesh) {
  double total = 0.0;
  for (double a : triangle_areas(mesh)) total += a;
  return total;
}

double signed_volume(const TriangleMesh& mesh) {
  double six_v = 0.0;
  for (const auto& t : mesh.triangles()) {
    six_v += mesh.vertex(t[0]).dot(mesh.vertex(t[1]).cross(mesh.vertex(t[2])));
  }
  return six_v / 6.0;
}

Vertices vertex_normals(const TriangleMesh& mesh) {
  Vertices normals = Vertices::Zero(static_cast<Eigen::Index>(mesh.num_vertices()), 3);
  for (const auto& t : mesh.triangles()) {
    const Vec3 a = mesh.vertex(t[0]);
    const Vec3 n = (mesh.vertex(t[1]) - a).cross(mesh.vertex(t[2]) - a);
    for (auto idx : t) normals.row(idx) += n.transpose();
  }
  for (Eigen::Index i = 0; i < normals.rows(); ++i) {
    const double len = normals.row(i).norm();
    if (len > 0.0) normals.row(i) /= len;
  }
  return normals;
}

double mean_edge_length(const TriangleMesh& mesh) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& t : mesh.triangles()) {
    for (int k = 0; k < 3; ++k) {
      total += (mesh.vertex(t[k]) - mesh.vertex(t[(k + 1) % 3])).norm();
      ++count;
    }
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

TriangleMesh subdivide_midpoint(const TriangleMesh& mesh) {
  std::vector<Vec3> points;
  points.reserve(mesh.num_vertices() * 4);
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) points.push_back(mesh.vertex(i));

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoints;
  auto midpoint = [&](std::uint32_t a, std::uint32_t b) {
    const auto key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const auto idx = static_cast<std::uint32_t>(points.size());
    points.push_back(0.5 * (points[a] + points[b]));
    midpoints.emplace(key, idx);
    return idx;
  };

  std::vector<Triangle> tris;
  tris.reserve(mesh.num_triangles() * 4);
  for (const auto& t : mesh.triangles()) {
    const auto ab = midpoint(t[0], t[1]);
    const auto bc = midpoint(t[1], t[2]);
    const auto ca = midpoint(t[2], t[0]);
    tris.push_back({t[0], ab, ca});
    tris.push_back({ab, t[1], bc});
    tris.push_back({ca, bc, t[2]});
    tris.push_back({ab, bc, ca});
  }
  Vertices v(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) v.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  return TriangleMesh(std::move(v), std::move(tris));
}

}  // namespace shapekit
