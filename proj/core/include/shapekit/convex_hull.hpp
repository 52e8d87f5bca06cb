// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace shapekit {

// Andrew's monotone chain. Returns indices of hull vertices in
// counter-clockwise order starting from the lexicographically smallest
// point. Collinear boundary points and exact duplicates are dropped. Fewer
// than three distinct non-collinear points yield the distinct extreme
// points only (0, 1 or 2 of them).
std::vector<std::size_t> convex_hull_2d(std::span<const Eigen::Vector2d> points);

}  // namespace shapekit
