// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Geometry>

#include "shapekit/mesh.hpp"

namespace shapekit {

struct ClosestPoint {
  Vec3 point;
  std::uint32_t triangle = 0;
  // Weights over the triangle's corners in stored order.
  Eigen::Vector3d barycentric;
  double distance = 0.0;
};

// Closest point on triangle (a, b, c) to p, with barycentric weights.
ClosestPoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Bounding-volume hierarchy over a mesh's triangles for nearest-surface
// queries. Holds a copy of the positions; immutable after construction.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriangleMesh& mesh);

  ClosestPoint closest(const Vec3& p) const;

 private:
  struct Node {
    Eigen::AlignedBox3d box;
    std::uint32_t left = 0;   // child index, or first triangle for leaves
    std::uint32_t count = 0;  // > 0 marks a leaf
    std::uint32_t right = 0;
  };

  std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);

  TriangleMesh mesh_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace shapekit
