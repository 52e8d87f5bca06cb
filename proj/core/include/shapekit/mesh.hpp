// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace shapekit {

using Vec3 = Eigen::Vector3d;
// One row per vertex, meters.
using Vertices = Eigen::Matrix<double, Eigen::Dynamic, 3, Eigen::RowMajor>;
using Triangle = std::array<std::uint32_t, 3>;

struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Topology shared between a template and every mesh shaped from it.
struct MeshTopology {
  std::size_t num_vertices = 0;
  std::vector<Triangle> triangles;
  // Every undirected edge has at least two incident triangles.
  bool closed = false;
  // Every undirected edge is traversed equally often in both directions.
  bool consistently_oriented = false;
  std::optional<Edge> boundary_edge;
  std::optional<Edge> misoriented_edge;
};

// Indexed triangle mesh. Construction validates indices and rejects
// degenerate (repeated-index) triangles; the closedness and orientation
// flags are computed once and carried along.
class TriangleMesh {
 public:
  TriangleMesh() = default;
  TriangleMesh(Vertices vertices, std::vector<Triangle> triangles);

  const Vertices& vertices() const { return vertices_; }
  std::span<const Triangle> triangles() const { return topology_->triangles; }
  std::size_t num_vertices() const { return static_cast<std::size_t>(vertices_.rows()); }
  std::size_t num_triangles() const { return topology_->triangles.size(); }

  Vec3 vertex(std::size_t i) const { return vertices_.row(static_cast<Eigen::Index>(i)).transpose(); }

  bool closed() const { return topology_->closed; }
  bool consistently_oriented() const { return topology_->consistently_oriented; }
  const std::optional<Edge>& boundary_edge() const { return topology_->boundary_edge; }
  const std::optional<Edge>& misoriented_edge() const { return topology_->misoriented_edge; }

  const std::shared_ptr<const MeshTopology>& topology() const { return topology_; }

  // Same topology, new positions. Row count must match.
  TriangleMesh with_vertices(Vertices vertices) const;

  // FNV-1a over vertex count and triangle indices.
  std::uint64_t topology_hash() const;

 private:
  Vertices vertices_;
  std::shared_ptr<const MeshTopology> topology_ = std::make_shared<MeshTopology>();
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
std::vector<double> triangle_areas(const TriangleMesh& mesh);
double surface_area(const TriangleMesh& mesh);

// Sum over triangles of dot(v0, cross(v1, v2)) / 6. Positive for outward
// winding on a closed mesh.
double signed_volume(const TriangleMesh& mesh);

// Area-weighted vertex normals, unit length.
Vertices vertex_normals(const TriangleMesh& mesh);

double mean_edge_length(const TriangleMesh& mesh);

// 1-to-4 midpoint subdivision. Shared edges get a single midpoint.
TriangleMesh subdivide_midpoint(const TriangleMesh& mesh);

}  // namespace shapekit
