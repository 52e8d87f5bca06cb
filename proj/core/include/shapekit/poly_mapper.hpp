// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "shapekit/body_model.hpp"

namespace shapekit {

// Crowd ratings on a 1..5 Likert scale, laid out [subject][attribute][rater].
class RatingMatrix {
 public:
  RatingMatrix(std::size_t subjects, std::vector<std::string> attribute_names, std::size_t raters,
               std::vector<std::uint8_t> scores, Gender gender = Gender::neutral);

  std::size_t num_subjects() const { return subjects_; }
  std::size_t num_attributes() const { return names_.size(); }
  std::size_t num_raters() const { return raters_; }
  const std::vector<std::string>& attribute_names() const { return names_; }
  Gender gender() const { return gender_; }

  std::uint8_t at(std::size_t subject, std::size_t attribute, std::size_t rater) const {
    return scores_[(subject * names_.size() + attribute) * raters_ + rater];
  }

 private:
  std::size_t subjects_;
  std::vector<std::string> names_;
  std::size_t raters_;
  std::vector<std::uint8_t> scores_;
  Gender gender_;
};

// Per-subject mean attribute scores, N x A, values in [1, 5].
using AttributeScores = Eigen::MatrixXd;

AttributeScores aggregate_ratings(const RatingMatrix& ratings);

// Raw input channels. Scalar measurement channels take physical units
// (meters, kilograms); the unit transforms are applied inside the mapper.
enum class Channel { attributes, betas, height, weight, chest, waist, hip };

std::string_view to_string(Channel channel);

struct FeatureSpec {
  std::vector<Channel> channels;
  int degree = 2;
  // Height m -> cm and weight kg -> cube root before feature expansion.
  bool unit_transforms = true;

  // "A2S", "S2A", "H2S", "HW2S", "C2S", "HC2S", "HWC2S", "AH2S", ...
  // Letters: A attributes, S (as input) betas, H height, W weight,
  // C chest + waist + hip circumferences.
  static FeatureSpec from_variant(std::string_view name, int degree = 2);
  std::string variant_name() const;
};

enum class OutputKind { betas, attribute_scores };

// "S2A" -> attribute_scores, "...2S" -> betas.
OutputKind variant_output(std::string_view name);

// Sizes of the vector-valued channels.
struct ChannelLayout {
  int num_attributes = 0;
  int num_betas = 0;
};

std::size_t input_dim(const FeatureSpec& spec, const ChannelLayout& layout);

// Number of monomials of total degree <= d in m variables: C(m + d, d).
std::size_t num_poly_features(std::size_t m, int degree);

// [1, x_0 .. x_{m-1}, x_i * x_j for i <= j in lexicographic order].
Eigen::VectorXd poly_features(const Eigen::VectorXd& raw, int degree);
// d features / d raw, (num_poly_features x m).
Eigen::MatrixXd poly_features_jacobian(const Eigen::VectorXd& raw, int degree);

class PolyMapper {
 public:
  PolyMapper() = default;
  PolyMapper(FeatureSpec spec, ChannelLayout layout, OutputKind output_kind, Eigen::MatrixXd weights,
             std::vector<std::string> attribute_names = {}, Gender gender = Gender::neutral);

  const FeatureSpec& spec() const { return spec_; }
  const ChannelLayout& layout() const { return layout_; }
  OutputKind output_kind() const { return output_kind_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const std::vector<std::string>& attribute_names() const { return attribute_names_; }
  Gender gender() const { return gender_; }
  std::size_t input_dim() const { return shapekit::input_dim(spec_, layout_); }
  std::size_t output_dim() const { return static_cast<std::size_t>(weights_.cols()); }

  // Unit transforms applied to a raw input row.
  Eigen::VectorXd transform(const Eigen::VectorXd& raw) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& raw) const;
  // d output / d raw, (output_dim x input_dim).
  Eigen::MatrixXd apply_jacobian(const Eigen::VectorXd& raw) const;

 private:
  void check_input(const Eigen::VectorXd& raw) const;

  FeatureSpec spec_;
  ChannelLayout layout_;
  OutputKind output_kind_ = OutputKind::betas;
  Eigen::MatrixXd weights_;
  std::vector<std::string> attribute_names_;
  Gender gender_ = Gender::neutral;
};

inline constexpr double kDefaultRidge = 1e-6;

// Least squares  min ||phi(X) W - Y||_F^2 + ridge ||W||_F^2 over raw input
// rows X (N x input_dim) and targets Y (N x output_dim). ridge = 0 uses
// column-pivoted QR and rejects rank-deficient systems.
PolyMapper fit_mapper(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                      const FeatureSpec& spec, const ChannelLayout& layout, OutputKind output_kind,
                      double ridge = kDefaultRidge, std::vector<std::string> attribute_names = {},
                      Gender gender = Gender::neutral);

// Root of the training residual sum of squares.
double training_residual(const PolyMapper& mapper, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets);

struct AttributePrediction {
  Eigen::VectorXd scores;
  // Per attribute: the raw prediction left [1, 5] and was clamped.
  std::vector<bool> clamped;
};

// Shape to attributes: mapper must take exactly the betas channel and
// output attribute scores.
AttributePrediction s2a(const PolyMapper& mapper, const ShapeVector& beta);

// JSON manifest at `json_path` plus float64 little-endian weights in a
// sibling file with the same stem and extension ".bin".
void save_mapper(const PolyMapper& mapper, const std::filesystem::path& json_path);
PolyMapper load_mapper(const std::filesystem::path& json_path);

}  // namespace shapekit
