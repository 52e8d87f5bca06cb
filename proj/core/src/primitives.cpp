// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/primitives.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "shapekit/error.hpp"

namespace shapekit {

namespace {

Vertices to_vertices(const std::vector<Vec3>& points) {
  Vertices v(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    v.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return v;
}

}  // namespace

TriangleMesh make_ring_stack(const std::vector<std::vector<Vec3>>& rings,
                             const std::optional<Vec3>& bottom_pole,
                             const std::optional<Vec3>& top_pole) {
  if (rings.empty() || rings.front().size() < 3) {
    throw Error(ErrorCode::invalid_argument, "ring stack needs at least one ring of 3+ vertices");
  }
  const std::size_t m = rings.front().size();
  std::vector<Vec3> points;
  for (const auto& ring : rings) {
    if (ring.size() != m) throw Error(ErrorCode::invalid_argument, "rings must have equal size");
    points.insert(points.end(), ring.begin(), ring.end());
  }
  auto at = [m](std::size_t ring, std::size_t i) {
    return static_cast<std::uint32_t>(ring * m + (i % m));
  };

  std::vector<Triangle> tris;
  for (std::size_t r = 0; r + 1 < rings.size(); ++r) {
    for (std::size_t i = 0; i < m; ++i) {
      tris.push_back({at(r, i), at(r + 1, i), at(r, i + 1)});
      tris.push_back({at(r, i + 1), at(r + 1, i), at(r + 1, i + 1)});
    }
  }

  const std::size_t last = rings.size() - 1;
  if (bottom_pole) {
    const auto b = static_cast<std::uint32_t>(points.size());
    points.push_back(*bottom_pole);
    for (std::size_t i = 0; i < m; ++i) tris.push_back({b, at(0, i), at(0, i + 1)});
  } else {
    for (std::size_t i = 1; i + 1 < m; ++i) tris.push_back({at(0, 0), at(0, i), at(0, i + 1)});
  }
  if (top_pole) {
    const auto t = static_cast<std::uint32_t>(points.size());
    points.push_back(*top_pole);
    for (std::size_t i = 0; i < m; ++i) tris.push_back({t, at(last, i + 1), at(last, i)});
  } else {
    for (std::size_t i = 1; i + 1 < m; ++i) tris.push_back({at(last, 0), at(last, i + 1), at(last, i)});
  }
  return TriangleMesh(to_vertices(points), std::move(tris));
}

TriangleMesh make_banded_cube(int bands) {
  if (bands < 1) throw Error(ErrorCode::invalid_argument, "bands must be >= 1");
  std::vector<std::vector<Vec3>> rings;
  for (int k = 0; k <= bands; ++k) {
    const double y = static_cast<double>(k) / bands;
    rings.push_back({Vec3(0, y, 0), Vec3(1, y, 0), Vec3(1, y, 1), Vec3(0, y, 1)});
  }
  return make_ring_stack(rings, std::nullopt, std::nullopt);
}

TriangleMesh make_unit_cube() { return make_banded_cube(1); }

TriangleMesh make_prism(int sides, double radius, double height, int rings) {
  if (sides < 3 || rings < 2) throw Error(ErrorCode::invalid_argument, "prism needs sides >= 3, rings >= 2");
  std::vector<std::vector<Vec3>> stack;
  for (int k = 0; k < rings; ++k) {
    const double y = height * k / (rings - 1);
    std::vector<Vec3> ring;
    for (int i = 0; i < sides; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / sides;
      ring.emplace_back(radius * std::cos(theta), y, radius * std::sin(theta));
    }
    stack.push_back(std::move(ring));
  }
  return make_ring_stack(stack, std::nullopt, std::nullopt);
}

TriangleMesh make_icosphere(double radius, int subdivisions) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> p = {
      {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
  };
  std::vector<Triangle> t = {
      {0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11},  {6, 2, 10},  {8, 6, 7}, {9, 8, 1},
  };
  for (auto& q : p) q = q.normalized() * radius;
  TriangleMesh mesh(to_vertices(p), std::move(t));
  for (int s = 0; s < subdivisions; ++s) {
    mesh = subdivide_midpoint(mesh);
    Vertices v = mesh.vertices();
    for (Eigen::Index i = 0; i < v.rows(); ++i) v.row(i) = v.row(i).normalized() * radius;
    mesh = mesh.with_vertices(std::move(v));
  }
  return mesh;
}

}  // namespace shapekit
