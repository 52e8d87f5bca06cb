// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "shapekit/mesh.hpp"

namespace shapekit {

enum class Gender { female, male, neutral };

std::string_view to_string(Gender gender);
Gender parse_gender(std::string_view text);

// Vertex indices used by the virtual measurements. On a valid model in the
// canonical pose chest.y > waist.y > hip.y (y is up).
struct LandmarkSet {
  std::uint32_t head_top = 0;
  std::uint32_t left_heel = 0;
  std::uint32_t chest = 0;
  std::uint32_t waist = 0;
  std::uint32_t hip = 0;
};

// Shape coefficients; length must equal BodyModel::num_betas().
using ShapeVector = Eigen::VectorXd;

// Buffer carried through load/save untouched (pose or expression blend
// shapes, for instance). Never applied.
struct PassthroughBuffer {
  std::string name;
  std::string descriptor_json;
  std::vector<std::uint8_t> bytes;
};

// Linear blend-shape body model in the canonical T-pose:
//
//   vertices(beta) = template + sum_b beta_b * basis_b
//
// The basis is stored as a (3N x B) matrix whose row 3v+c holds the
// displacement of coordinate c of vertex v per unit beta. Immutable once
// constructed.
class BodyModel {
 public:
  BodyModel(TriangleMesh template_mesh, Eigen::MatrixXd shape_basis, Gender gender,
            LandmarkSet landmarks);

  const TriangleMesh& template_mesh() const { return template_; }
  const Eigen::MatrixXd& shape_basis() const { return basis_; }
  int num_betas() const { return static_cast<int>(basis_.cols()); }
  std::size_t num_vertices() const { return template_.num_vertices(); }
  Gender gender() const { return gender_; }
  const LandmarkSet& landmarks() const { return landmarks_; }

  Vertices shaped_vertices(const ShapeVector& beta) const;
  TriangleMesh shaped_mesh(const ShapeVector& beta) const;

  // d vertices / d beta restricted to `subset`: a (3|subset| x B) matrix,
  // row 3i+c for coordinate c of subset[i]. Constant because the model is
  // linear in beta.
  Eigen::MatrixXd shaped_mesh_jacobian(std::span<const std::uint32_t> subset) const;

  // (3 x B) block for one vertex.
  auto vertex_jacobian(std::uint32_t v) const {
    return basis_.middleRows(3 * static_cast<Eigen::Index>(v), 3);
  }

  // Free-form JSON object stored in the archive manifest under "metadata".
  const std::string& metadata_json() const { return metadata_json_; }
  void set_metadata_json(std::string json) { metadata_json_ = std::move(json); }

  const std::vector<PassthroughBuffer>& passthrough_buffers() const { return passthrough_; }
  void set_passthrough_buffers(std::vector<PassthroughBuffer> buffers) {
    passthrough_ = std::move(buffers);
  }

 private:
  void check_beta(const ShapeVector& beta) const;

  TriangleMesh template_;
  Eigen::MatrixXd basis_;
  Gender gender_;
  LandmarkSet landmarks_;
  std::string metadata_json_ = "{}";
  std::vector<PassthroughBuffer> passthrough_;
};

}  // namespace shapekit
