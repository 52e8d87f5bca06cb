// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "shapekit/error.hpp"
#include "shapekit/mesh.hpp"
#include "shapekit/primitives.hpp"

namespace shapekit {
namespace {

Vertices tetra_vertices() {
  Vertices v(4, 3);
  v << 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1;
  return v;
}

// Outward winding for tetra_vertices().
std::vector<Triangle> tetra_triangles() { return {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}; }

TEST(TriangleMesh, ClosedTetrahedron) {
  const TriangleMesh m(tetra_vertices(), tetra_triangles());
  EXPECT_TRUE(m.closed());
  EXPECT_TRUE(m.consistently_oriented());
  EXPECT_NEAR(signed_volume(m), 1.0 / 6.0, 1e-15);
}

TEST(TriangleMesh, OpenMeshReportsBoundaryEdge) {
  auto tris = tetra_triangles();
  tris.pop_back();
  const TriangleMesh m(tetra_vertices(), tris);
  EXPECT_FALSE(m.closed());
  ASSERT_TRUE(m.boundary_edge().has_value());
}

TEST(TriangleMesh, FlippedFaceIsMisoriented) {
  auto tris = tetra_triangles();
  std::swap(tris[3][0], tris[3][1]);
  const TriangleMesh m(tetra_vertices(), tris);
  EXPECT_TRUE(m.closed());
  EXPECT_FALSE(m.consistently_oriented());
  EXPECT_TRUE(m.misoriented_edge().has_value());
}

TEST(TriangleMesh, RejectsBadIndices) {
  try {
    TriangleMesh(tetra_vertices(), {{0, 1, 4}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_mesh);
    EXPECT_EQ(e.context(), "triangles[0]");
  }
}

TEST(TriangleMesh, RejectsRepeatedIndex) {
  EXPECT_THROW(TriangleMesh(tetra_vertices(), {{0, 1, 3}, {2, 2, 1}}), Error);
}

TEST(TriangleMesh, WithVerticesSharesTopology) {
  const TriangleMesh m(tetra_vertices(), tetra_triangles());
  const TriangleMesh n = m.with_vertices(2.0 * tetra_vertices());
  EXPECT_EQ(m.topology().get(), n.topology().get());
  EXPECT_EQ(m.topology_hash(), n.topology_hash());
  EXPECT_NEAR(signed_volume(n), 8.0 / 6.0, 1e-14);
  EXPECT_THROW((void)m.with_vertices(Vertices::Zero(3, 3)), Error);
}

TEST(TriangleMesh, TopologyHashSeesIndexChanges) {
  const TriangleMesh a(tetra_vertices(), tetra_triangles());
  auto tris = tetra_triangles();
  std::rotate(tris[0].begin(), tris[0].begin() + 1, tris[0].end());
  const TriangleMesh b(tetra_vertices(), tris);
  EXPECT_NE(a.topology_hash(), b.topology_hash());
}

TEST(MeshMeasures, UnitCubeAreaAndVolume) {
  const TriangleMesh cube = make_unit_cube();
  EXPECT_DOUBLE_EQ(surface_area(cube), 6.0);
  EXPECT_DOUBLE_EQ(signed_volume(cube), 1.0);
}

TEST(MeshMeasures, SubdivisionKeepsSurface) {
  const TriangleMesh cube = make_unit_cube();
  const TriangleMesh fine = subdivide_midpoint(cube);
  EXPECT_EQ(fine.num_triangles(), 4 * cube.num_triangles());
  // 8 corners + one midpoint per edge (18 edges).
  EXPECT_EQ(fine.num_vertices(), 26u);
  EXPECT_TRUE(fine.closed());
  EXPECT_TRUE(fine.consistently_oriented());
  EXPECT_NEAR(surface_area(fine), 6.0, 1e-14);
  EXPECT_NEAR(signed_volume(fine), 1.0, 1e-14);
}

TEST(MeshMeasures, NormalsPointOutOfSphere) {
  const TriangleMesh s = make_icosphere(1.0, 2);
  const Vertices n = vertex_normals(s);
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    EXPECT_NEAR(n.row(i).norm(), 1.0, 1e-12);
    EXPECT_GT(n.row(i).dot(s.vertices().row(i)), 0.99);
  }
}

}  // namespace
}  // namespace shapekit
