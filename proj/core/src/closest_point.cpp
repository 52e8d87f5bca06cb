// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/closest_point.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace shapekit {

ClosestPoint closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Region tests after Ericson, Real-Time Collision Detection, 5.1.5.
  ClosestPoint out;
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  auto finish = [&](double u, double v, double w) {
    out.barycentric = Eigen::Vector3d(u, v, w);
    out.point = u * a + v * b + w * c;
    out.distance = (p - out.point).norm();
    return out;
  };
  if (d1 <= 0.0 && d2 <= 0.0) return finish(1, 0, 0);

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return finish(0, 1, 0);

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return finish(1 - v, v, 0);
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return finish(0, 0, 1);

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return finish(1 - w, 0, w);
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return finish(0, 1 - w, w);
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return finish(1 - v - w, v, w);
}

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) : mesh_(mesh) {
  const auto n = static_cast<std::uint32_t>(mesh.num_triangles());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  std::vector<Vec3> centroids(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    const auto& tri = mesh.triangles()[t];
    centroids[t] = (mesh.vertex(tri[0]) + mesh.vertex(tri[1]) + mesh.vertex(tri[2])) / 3.0;
  }
  nodes_.reserve(2 * static_cast<std::size_t>(n) + 1);
  if (n > 0) build(0, n, centroids);
}

std::uint32_t TriangleBvh::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
  const auto index = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back({});
  Eigen::AlignedBox3d box;
  Eigen::AlignedBox3d cbox;
  for (std::uint32_t i = begin; i < end; ++i) {
    const auto& tri = mesh_.triangles()[order_[i]];
    for (auto v : tri) box.extend(mesh_.vertex(v));
    cbox.extend(centroids[order_[i]]);
  }
  nodes_[index].box = box;

  constexpr std::uint32_t kLeafSize = 4;
  if (end - begin <= kLeafSize) {
    nodes_[index].left = begin;
    nodes_[index].count = end - begin;
    return index;
  }
  Eigen::Index axis = 0;
  cbox.sizes().maxCoeff(&axis);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t x, std::uint32_t y) {
                     if (centroids[x][axis] != centroids[y][axis]) return centroids[x][axis] < centroids[y][axis];
                     return x < y;
                   });
  const std::uint32_t left = build(begin, mid, centroids);
  const std::uint32_t right = build(mid, end, centroids);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

ClosestPoint TriangleBvh::closest(const Vec3& p) const {
  ClosestPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  if (nodes_.empty()) return best;

  std::vector<std::uint32_t> stack = {0};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.box.exteriorDistance(p) > best.distance) continue;
    if (node.count > 0) {
      for (std::uint32_t i = node.left; i < node.left + node.count; ++i) {
        const std::uint32_t t = order_[i];
        const auto& tri = mesh_.triangles()[t];
        ClosestPoint c = closest_point_on_triangle(p, mesh_.vertex(tri[0]), mesh_.vertex(tri[1]), mesh_.vertex(tri[2]));
        if (c.distance < best.distance || (c.distance == best.distance && t < best.triangle)) {
          c.triangle = t;
          best = c;
        }
      }
      continue;
    }
    const double dl = nodes_[node.left].box.exteriorDistance(p);
    const double dr = nodes_[node.right].box.exteriorDistance(p);
    // Visit the nearer child first.
    if (dl < dr) {
      stack.push_back(node.right);
      stack.push_back(node.left);
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return best;
}

}  // namespace shapekit
