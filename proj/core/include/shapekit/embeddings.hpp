// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shapekit/body_model.hpp"

namespace shapekit {

inline constexpr int kEmbeddingDim = 512;

// One row per image, each row unit length.
struct SubjectEmbeddings {
  std::string id;
  Gender gender = Gender::neutral;
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> vectors;
};

struct EmbeddingSet {
  std::string source;
  int dim = kEmbeddingDim;
  std::vector<SubjectEmbeddings> subjects;

  // Throws invalid_argument if any vector deviates from unit norm by more
  // than `tol` or if a subject has no images.
  void validate(double tol = 1e-6) const;
};

// Manifest JSON next to a little-endian float32 buffer; see docs/format.md.
EmbeddingSet load_embeddings(const std::filesystem::path& manifest);
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& manifest);

struct SubjectRecord {
  std::string id;
  Gender gender = Gender::neutral;
  std::optional<double> height;  // m
  std::optional<double> weight;  // kg
  int image_count = 0;
  std::optional<double> bmi;

  // Stored BMI, else weight / height^2 when both are known.
  std::optional<double> effective_bmi() const;
};

// Columns: subject_id, gender, height_m, weight_kg, image_count, bmi.
// Only subject_id is required.
std::vector<SubjectRecord> read_subjects_csv(const std::filesystem::path& path);
void write_subjects_csv(const std::vector<SubjectRecord>& subjects, const std::filesystem::path& path);

}  // namespace shapekit
