// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shapekit/anthropometry.hpp"
#include "shapekit/body_model.hpp"
#include "shapekit/poly_mapper.hpp"

namespace shapekit {

// One subject row. Measurements are optional; attributes and betas may be
// empty when a file carries none.
struct SubjectSample {
  std::string id;
  Gender gender = Gender::neutral;
  std::optional<double> height;  // m
  std::optional<double> weight;  // kg
  std::optional<double> chest;   // m
  std::optional<double> waist;   // m
  std::optional<double> hip;     // m
  Eigen::VectorXd attributes;
  Eigen::VectorXd betas;
};

// Columns: subject_id, gender, height_m, weight_kg, chest_m, waist_m, hip_m,
// attr_<name>..., beta_<i>...  Any subset of the measurement, attribute and
// beta columns may be present.
struct TrainingSet {
  std::vector<std::string> attribute_names;
  int num_betas = 0;
  std::vector<SubjectSample> samples;

  ChannelLayout layout() const { return {static_cast<int>(attribute_names.size()), num_betas}; }
  TrainingSet filter(Gender gender) const;
};

TrainingSet read_training_csv(const std::filesystem::path& path);
void write_training_csv(const std::filesystem::path& path, const TrainingSet& set);

// Raw input row for `spec`, in channel order. Throws if a channel is
// missing for this sample.
Eigen::VectorXd assemble_input(const FeatureSpec& spec, const SubjectSample& sample);

// Stacked inputs and targets for fitting `spec` with the given output.
struct DesignMatrices {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
};
DesignMatrices design_matrices(const TrainingSet& set, const FeatureSpec& spec, OutputKind output);

// Betas tables: subject_id, beta_0 .. beta_{B-1}.
struct BetaTable {
  std::vector<std::string> ids;
  std::vector<ShapeVector> betas;
};
BetaTable read_betas_csv(const std::filesystem::path& path);
void write_betas_csv(const std::filesystem::path& path, const BetaTable& table);

// Measurement tables: subject_id (optional), height_m, weight_kg, chest_m,
// waist_m, hip_m.
void write_measurements_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                            const std::vector<MeasurementSet>& rows);
std::vector<MeasurementSet> read_measurements_csv(const std::filesystem::path& path,
                                                  std::vector<std::string>* ids = nullptr);

}  // namespace shapekit
