// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/convex_hull.hpp"

#include <algorithm>
#include <numeric>

namespace shapekit {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

}  // namespace

std::vector<std::size_t> convex_hull_2d(std::span<const Eigen::Vector2d> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (points[i].x() != points[j].x()) return points[i].x() < points[j].x();
    if (points[i].y() != points[j].y()) return points[i].y() < points[j].y();
    return i < j;
  });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t i, std::size_t j) { return points[i] == points[j]; }),
              order.end());
  if (order.size() < 3) return order;

  std::vector<std::size_t> hull(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  for (std::size_t n = order.size() - 1, lower = k + 1; n-- > 0;) {
    const std::size_t i = order[n];
    while (k >= lower && cross(points[hull[k - 2]], points[hull[k - 1]], points[i]) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    // All points collinear: keep the two extremes.
    return {order.front(), order.back()};
  }
  return hull;
}

}  // namespace shapekit
