// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Sparse>

#include "shapekit/mesh.hpp"

namespace shapekit {

inline constexpr std::size_t kDefaultSurfacePoints = 20000;

// Sparse P x N matrix mapping mesh vertices to surface points. Every row is
// a convex combination of the three corners of one triangle.
class PointRegressor {
 public:
  struct Row {
    std::array<std::uint32_t, 3> vertices{};
    std::array<double, 3> weights{};
  };

  PointRegressor() = default;
  PointRegressor(std::vector<Row> rows, std::size_t num_vertices, std::uint64_t topology_id);

  std::size_t num_points() const { return rows_.size(); }
  std::size_t num_vertices() const { return num_vertices_; }
  std::uint64_t topology_id() const { return topology_id_; }
  const std::vector<Row>& rows() const { return rows_; }

  // P = H V, one point per row.
  Vertices regress(const Vertices& vertices) const;
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix() const;

  friend bool operator==(const PointRegressor& a, const PointRegressor& b);

 private:
  std::vector<Row> rows_;
  std::size_t num_vertices_ = 0;
  std::uint64_t topology_id_ = 0;
};

// Area-uniform samples on `mesh`: triangle drawn with probability
// proportional to area (inverse CDF over the running area sum in triangle
// order), barycentrics uniform over the simplex via the square-root map.
// Draws 3i, 3i+1, 3i+2 of CounterRng(seed) feed point i.
PointRegressor build_point_regressor(const TriangleMesh& mesh, std::size_t num_points = kDefaultSurfacePoints,
                                     std::uint64_t seed = 0);

struct RegressorTransfer {
  PointRegressor regressor;
  double mean_distance = 0.0;  // m
  double max_distance = 0.0;   // m
};

// Re-expresses the surface points of `source_reg` (evaluated on
// `source_template`) as closest points on `target_template`. Both templates
// must already be aligned.
RegressorTransfer transfer_point_regressor(const TriangleMesh& source_template,
                                           const TriangleMesh& target_template,
                                           const PointRegressor& source_reg);

// Binary cache format; see docs/format.md.
void save_point_regressor(const PointRegressor& reg, const std::filesystem::path& path);
PointRegressor load_point_regressor(const std::filesystem::path& path);

}  // namespace shapekit
