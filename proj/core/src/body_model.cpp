// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/body_model.hpp"

#include <string>

#include "shapekit/error.hpp"

namespace shapekit {

std::string_view to_string(Gender gender) {
  switch (gender) {
    case Gender::female: return "female";
    case Gender::male: return "male";
    case Gender::neutral: return "neutral";
  }
  return "neutral";
}

Gender parse_gender(std::string_view text) {
  if (text == "female" || text == "f") return Gender::female;
  if (text == "male" || text == "m") return Gender::male;
  if (text == "neutral" || text == "n") return Gender::neutral;
  throw Error(ErrorCode::parse_error, "unknown gender '" + std::string(text) + "'");
}

BodyModel::BodyModel(TriangleMesh template_mesh, Eigen::MatrixXd shape_basis, Gender gender,
                     LandmarkSet landmarks)
    : template_(std::move(template_mesh)),
      basis_(std::move(shape_basis)),
      gender_(gender),
      landmarks_(landmarks) {
  const auto n = static_cast<Eigen::Index>(template_.num_vertices());
  if (basis_.rows() != 3 * n) {
    throw Error(ErrorCode::dimension_mismatch,
                "shape basis covers " + std::to_string(basis_.rows() / 3) +
                    " vertices but template has " + std::to_string(n),
                "shape_basis");
  }
  if (basis_.cols() < 1) {
    throw Error(ErrorCode::dimension_mismatch, "shape basis needs at least one direction",
                "num_betas");
  }
  const std::pair<const char*, std::uint32_t> named[] = {
      {"head_top", landmarks_.head_top}, {"left_heel", landmarks_.left_heel},
      {"chest", landmarks_.chest},       {"waist", landmarks_.waist},
      {"hip", landmarks_.hip}};
  for (const auto& [name, idx] : named) {
    if (idx >= template_.num_vertices()) {
      throw Error(ErrorCode::missing_landmark,
                  "landmark index " + std::to_string(idx) + " out of range",
                  std::string("landmarks.") + name);
    }
  }
  const auto& v = template_.vertices();
  const double yc = v(landmarks_.chest, 1);
  const double yw = v(landmarks_.waist, 1);
  const double yh = v(landmarks_.hip, 1);
  if (!(yc > yw && yw > yh)) {
    throw Error(ErrorCode::missing_landmark,
                "landmarks must satisfy chest.y > waist.y > hip.y in the template", "landmarks");
  }
}

void BodyModel::check_beta(const ShapeVector& beta) const {
  if (beta.size() != basis_.cols()) {
    throw Error(ErrorCode::dimension_mismatch,
                "beta has length " + std::to_string(beta.size()) + ", model expects " +
                    std::to_string(basis_.cols()),
                "beta");
  }
}

Vertices BodyModel::shaped_vertices(const ShapeVector& beta) const {
  check_beta(beta);
  const Eigen::VectorXd offsets = basis_ * beta;
  Vertices out = template_.vertices();
  out += Eigen::Map<const Vertices>(offsets.data(), out.rows(), 3);
  return out;
}

TriangleMesh BodyModel::shaped_mesh(const ShapeVector& beta) const {
  return template_.with_vertices(shaped_vertices(beta));
}

Eigen::MatrixXd BodyModel::shaped_mesh_jacobian(std::span<const std::uint32_t> subset) const {
  Eigen::MatrixXd jac(3 * static_cast<Eigen::Index>(subset.size()), basis_.cols());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= template_.num_vertices()) {
      throw Error(ErrorCode::invalid_argument,
                  "vertex index " + std::to_string(subset[i]) + " out of range",
                  "subset[" + std::to_string(i) + "]");
    }
    jac.middleRows(3 * static_cast<Eigen::Index>(i), 3) = vertex_jacobian(subset[i]);
  }
  return jac;
}

}  // namespace shapekit
