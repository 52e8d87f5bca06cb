// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shapekit/anthropometry.hpp"
#include "shapekit/mesh.hpp"
#include "shapekit/point_regressor.hpp"

namespace shapekit {

// Mean distance in millimeters between regressed surface points after
// moving mesh 1 onto mesh 2 by the difference of their point centroids.
double p2p20k(const PointRegressor& reg1, const Vertices& verts1, const PointRegressor& reg2,
              const Vertices& verts2);

// Same translation correction, applied to vertices directly. Millimeters.
double v2v(const Vertices& verts1, const Vertices& verts2);

// Mean absolute error per field; lengths in mm, weight in kg.
struct MeasurementErrors {
  double height_mm = 0.0;
  double weight_kg = 0.0;
  double chest_mm = 0.0;
  double waist_mm = 0.0;
  double hip_mm = 0.0;
};

MeasurementErrors measurement_mae(const std::vector<MeasurementSet>& pred, const std::vector<MeasurementSet>& gt);

// Likert class of a continuous score: half-up rounding, clamped to [1,5].
int attribute_class(double score);

struct AttributeAccuracy {
  std::string name;
  double accuracy = 0.0;  // fraction in [0,1]
  double mae = 0.0;
  double mae_sd = 0.0;    // population SD of |pred - gt|
};

struct S2aAccuracy {
  double accuracy = 0.0;
  std::vector<AttributeAccuracy> per_attribute;
};

S2aAccuracy s2a_accuracy(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt,
                         const std::vector<std::string>& names = {});

struct ShapeErrorReport {
  std::vector<std::string> ids;
  std::vector<double> p2p20k_mm;
  std::vector<std::optional<double>> v2v_mm;  // absent across topologies
  std::optional<MeasurementErrors> mae;

  double mean_p2p20k() const;
  std::optional<double> mean_v2v() const;
};

}  // namespace shapekit
