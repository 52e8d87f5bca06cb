// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/point_regressor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "binary_io.hpp"
#include "shapekit/closest_point.hpp"
#include "shapekit/error.hpp"
#include "shapekit/random.hpp"

namespace shapekit {

PointRegressor::PointRegressor(std::vector<Row> rows, std::size_t num_vertices, std::uint64_t topology_id)
    : rows_(std::move(rows)), num_vertices_(num_vertices), topology_id_(topology_id) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      if (rows_[i].vertices[k] >= num_vertices_ || rows_[i].weights[k] < 0.0) {
        throw Error(ErrorCode::invalid_argument, "regressor row references a bad vertex or negative weight",
                    "row " + std::to_string(i));
      }
      sum += rows_[i].weights[k];
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw Error(ErrorCode::invalid_argument, "regressor row does not sum to 1", "row " + std::to_string(i));
    }
  }
}

Vertices PointRegressor::regress(const Vertices& vertices) const {
  if (static_cast<std::size_t>(vertices.rows()) != num_vertices_) {
    throw Error(ErrorCode::dimension_mismatch,
                "regressor expects " + std::to_string(num_vertices_) + " vertices, got " +
                    std::to_string(vertices.rows()),
                "vertices");
  }
  Vertices out(static_cast<Eigen::Index>(rows_.size()), 3);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& r = rows_[i];
    out.row(static_cast<Eigen::Index>(i)) = r.weights[0] * vertices.row(r.vertices[0]) +
                                            r.weights[1] * vertices.row(r.vertices[1]) +
                                            r.weights[2] * vertices.row(r.vertices[2]);
  }
  return out;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> PointRegressor::matrix() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(3 * rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (int k = 0; k < 3; ++k) {
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(rows_[i].vertices[k]), rows_[i].weights[k]);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> h(static_cast<Eigen::Index>(rows_.size()),
                                                 static_cast<Eigen::Index>(num_vertices_));
  h.setFromTriplets(triplets.begin(), triplets.end());
  return h;
}

bool operator==(const PointRegressor& a, const PointRegressor& b) {
  if (a.num_vertices_ != b.num_vertices_ || a.topology_id_ != b.topology_id_ || a.rows_.size() != b.rows_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rows_.size(); ++i) {
    if (a.rows_[i].vertices != b.rows_[i].vertices) return false;
    if (std::memcmp(a.rows_[i].weights.data(), b.rows_[i].weights.data(), sizeof(double) * 3) != 0) return false;
  }
  return true;
}

PointRegressor build_point_regressor(const TriangleMesh& mesh, std::size_t num_points, std::uint64_t seed) {
  const auto areas = triangle_areas(mesh);
  std::vector<double> cumulative(areas.size());
  double total = 0.0;
  for (std::size_t t = 0; t < areas.size(); ++t) {
    total += areas[t];
    cumulative[t] = total;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::invalid_mesh, "mesh has zero surface area");

  const CounterRng rng(seed);
  std::vector<PointRegressor::Row> rows(num_points);
  for (std::size_t i = 0; i < num_points; ++i) {
    const double pick = rng.uniform(3 * i) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    // Skip zero-area triangles that share the cumulative value.
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), areas.size() - 1);
    const double s = std::sqrt(rng.uniform(3 * i + 1));
    const double r2 = rng.uniform(3 * i + 2);
    const auto& tri = mesh.triangles()[t];
    rows[i].vertices = {tri[0], tri[1], tri[2]};
    rows[i].weights = {1.0 - s, s * (1.0 - r2), s * r2};
  }
  return PointRegressor(std::move(rows), mesh.num_vertices(), mesh.topology_hash());
}

RegressorTransfer transfer_point_regressor(const TriangleMesh& source_template,
                                           const TriangleMesh& target_template,
                                           const PointRegressor& source_reg) {
  const Vertices points = source_reg.regress(source_template.vertices());
  const TriangleBvh bvh(target_template);
  RegressorTransfer out;
  std::vector<PointRegressor::Row> rows(source_reg.num_points());
  double sum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ClosestPoint c = bvh.closest(points.row(static_cast<Eigen::Index>(i)).transpose());
    const auto& tri = target_template.triangles()[c.triangle];
    rows[i].vertices = {tri[0], tri[1], tri[2]};
    for (int k = 0; k < 3; ++k) rows[i].weights[k] = std::max(0.0, c.barycentric[k]);
    sum += c.distance;
    out.max_distance = std::max(out.max_distance, c.distance);
  }
  out.mean_distance = rows.empty() ? 0.0 : sum / static_cast<double>(rows.size());
  out.regressor = PointRegressor(std::move(rows), target_template.num_vertices(), target_template.topology_hash());
  return out;
}

namespace {

constexpr char kMagic[8] = {'S', 'K', 'P', 'R', 'E', 'G', '0', '1'};

}  // namespace

void save_point_regressor(const PointRegressor& reg, const std::filesystem::path& path) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 8);
  const std::uint64_t header[3] = {reg.topology_id(), reg.num_vertices(), reg.num_points()};
  auto h = detail::encode_le<std::uint64_t>(header);
  out.insert(out.end(), h.begin(), h.end());
  std::vector<std::uint32_t> idx;
  std::vector<double> w;
  for (const auto& r : reg.rows()) {
    idx.insert(idx.end(), r.vertices.begin(), r.vertices.end());
    w.insert(w.end(), r.weights.begin(), r.weights.end());
  }
  auto ib = detail::encode_le<std::uint32_t>(idx);
  auto wb = detail::encode_le<double>(w);
  out.insert(out.end(), ib.begin(), ib.end());
  out.insert(out.end(), wb.begin(), wb.end());
  detail::write_file(path, out);
}

PointRegressor load_point_regressor(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  if (bytes.size() < 32 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
    throw Error(ErrorCode::parse_error, "not a point regressor file", path.string());
  }
  const auto header = detail::decode_le<std::uint64_t>(std::span(bytes).subspan(8, 24), path.string());
  const std::size_t p = header[2];
  const std::size_t expected = 32 + p * 3 * 4 + p * 3 * 8;
  if (bytes.size() != expected) throw Error(ErrorCode::parse_error, "truncated point regressor file", path.string());
  const auto idx = detail::decode_le<std::uint32_t>(std::span(bytes).subspan(32, p * 12), path.string());
  const auto w = detail::decode_le<double>(std::span(bytes).subspan(32 + p * 12, p * 24), path.string());
  std::vector<PointRegressor::Row> rows(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (int k = 0; k < 3; ++k) {
      rows[i].vertices[k] = idx[3 * i + k];
      rows[i].weights[k] = w[3 * i + k];
    }
  }
  return PointRegressor(std::move(rows), header[1], header[0]);
}

}  // namespace shapekit
