// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "shapekit/mesh.hpp"

namespace shapekit {

// Closed mesh from a stack of horizontal rings, bottom to top. All rings
// have the same vertex count and run counter-clockwise seen from +y
// (x toward z). A missing pole caps that end with a fan from the ring's
// first vertex, which is only valid for convex rings. Winding is outward.
TriangleMesh make_ring_stack(const std::vector<std::vector<Vec3>>& rings,
                             const std::optional<Vec3>& bottom_pole,
                             const std::optional<Vec3>& top_pole);

// Axis-aligned [0,1]^3 cube, 8 vertices and 12 triangles.
TriangleMesh make_unit_cube();

// [0,1]^3 cube whose sides are split into `bands` horizontal bands, so it
// has 4 * (bands + 1) vertices with rings at y = k / bands.
TriangleMesh make_banded_cube(int bands);

// Regular n-gon prism of circumradius `radius` centred on the y axis, with
// `rings` >= 2 evenly spaced rings from y = 0 to y = height.
TriangleMesh make_prism(int sides, double radius, double height, int rings);

// Icosahedron refined `subdivisions` times with vertices projected onto the
// sphere.
TriangleMesh make_icosphere(double radius, int subdivisions);

}  // namespace shapekit
