// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "shapekit/body_model.hpp"
#include "shapekit/mesh.hpp"

namespace shapekit {

// Average human body density, kg/m^3.
inline constexpr double kDefaultBodyDensity = 985.0;

// Heights and circumferences in meters, weight in kilograms.
struct MeasurementSet {
  double height = 0.0;
  double weight = 0.0;
  double chest_circ = 0.0;
  double waist_circ = 0.0;
  double hip_circ = 0.0;

  std::array<double, 5> as_array() const { return {height, weight, chest_circ, waist_circ, hip_circ}; }
  static MeasurementSet from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }
};

struct MeasureOptions {
  double density = kDefaultBodyDensity;
  // Restrict each hull to the intersection loop nearest the landmark.
  bool torso_only = false;
  // measure() rejects circumferences above this bound.
  double max_circumference = 4.0;
};

// A point where a crossing mesh edge meets the plane. The crossing edge runs
// from `below` (y < h) to `above` (y >= h); position = (1-t)*below + t*above.
// `barycentric` holds the same weights over triangle `triangle`'s corners in
// their stored order.
struct IntersectionPoint {
  Vec3 position;
  std::uint32_t triangle = 0;
  Eigen::Vector3d barycentric;
  std::uint32_t below = 0;
  std::uint32_t above = 0;
  double t = 0.0;
  // Unique per crossing edge; an on-plane vertex v maps to (v, v).
  std::pair<std::uint32_t, std::uint32_t> key;
};

// Intersection of a mesh with the horizontal plane y = plane_height.
// Vertices exactly on the plane count as lying above it (an infinitesimal
// upward perturbation), so each crossing triangle contributes one segment.
struct PlaneSection {
  double plane_height = 0.0;
  std::vector<IntersectionPoint> points;
  // One segment per crossing triangle, as point-index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  // Convex hull of the (x, z) projections, as a closed cycle of
  // point-index pairs.
  std::vector<std::pair<std::size_t, std::size_t>> hull_edges;

  // Hull point indices in cycle order.
  std::vector<std::size_t> hull_cycle() const;
};

double height(const TriangleMesh& mesh, const LandmarkSet& landmarks);

// density * |signed volume|. Requires a closed, consistently wound mesh.
double weight(const TriangleMesh& mesh, double density = kDefaultBodyDensity);

PlaneSection plane_section(const TriangleMesh& mesh, double plane_height);

// Keeps only the connected intersection loop containing the point nearest to
// `anchor` in (x, z) and recomputes the hull over it.
PlaneSection restrict_to_component(const PlaneSection& section, const Vec3& anchor);

// Length of the hull with endpoints reconstructed from their barycentric
// provenance on the mesh triangles.
double hull_length(const TriangleMesh& mesh, const PlaneSection& section);

double circumference(const TriangleMesh& mesh, std::uint32_t landmark_vertex, bool torso_only = false);

MeasurementSet measure_mesh(const TriangleMesh& mesh, const LandmarkSet& landmarks,
                            const MeasureOptions& options = {});
MeasurementSet measure(const BodyModel& model, const ShapeVector& beta,
                       const MeasureOptions& options = {});

// Sparse gradient of a scalar with respect to vertex positions.
using VertexGradient = std::vector<std::pair<std::uint32_t, Vec3>>;

VertexGradient height_vertex_gradient(const TriangleMesh& mesh, const LandmarkSet& landmarks);
VertexGradient weight_vertex_gradient(const TriangleMesh& mesh, double density = kDefaultBodyDensity);
// Gradient of hull_length for fixed section combinatorics, including the
// dependence of the plane height on the landmark vertex.
VertexGradient circumference_vertex_gradient(const TriangleMesh& mesh, const PlaneSection& section,
                                             std::uint32_t landmark_vertex);

// Chains a vertex gradient through the (constant) model Jacobian.
Eigen::VectorXd to_beta_gradient(const BodyModel& model, const VertexGradient& grad);

struct MeasurementGradients {
  MeasurementSet values;
  Eigen::VectorXd height;
  Eigen::VectorXd weight;
  Eigen::VectorXd chest_circ;
  Eigen::VectorXd waist_circ;
  Eigen::VectorXd hip_circ;
  // Per circumference (chest, waist, hip): hull combinatorics change within
  // a 1e-7 perturbation of beta, so the gradient is one-sided there.
  std::array<bool, 3> circ_non_smooth{false, false, false};

  bool non_smooth() const { return circ_non_smooth[0] || circ_non_smooth[1] || circ_non_smooth[2]; }
};

inline constexpr double kNonSmoothProbe = 1e-7;

MeasurementGradients measure_gradients(const BodyModel& model, const ShapeVector& beta,
                                       const MeasureOptions& options = {});

}  // namespace shapekit
