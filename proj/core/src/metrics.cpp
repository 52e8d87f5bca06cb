// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "shapekit/error.hpp"

namespace shapekit {
namespace {

double translated_mean_distance(const Vertices& a, const Vertices& b) {
  if (a.rows() == 0) return 0.0;
  const Eigen::RowVector3d t = b.colwise().mean() - a.colwise().mean();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) sum += (a.row(i) + t - b.row(i)).norm();
  return 1000.0 * sum / static_cast<double>(a.rows());
}

}  // namespace

double p2p20k(const PointRegressor& reg1, const Vertices& verts1, const PointRegressor& reg2,
              const Vertices& verts2) {
  if (reg1.num_points() != reg2.num_points()) {
    throw Error(ErrorCode::dimension_mismatch,
                "regressors disagree on point count: " + std::to_string(reg1.num_points()) + " vs " +
                    std::to_string(reg2.num_points()),
                "reg2");
  }
  return translated_mean_distance(reg1.regress(verts1), reg2.regress(verts2));
}

double v2v(const Vertices& verts1, const Vertices& verts2) {
  if (verts1.rows() != verts2.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "vertex counts differ: " + std::to_string(verts1.rows()) + " vs " + std::to_string(verts2.rows()),
                "verts2");
  }
  return translated_mean_distance(verts1, verts2);
}

MeasurementErrors measurement_mae(const std::vector<MeasurementSet>& pred, const std::vector<MeasurementSet>& gt) {
  if (pred.size() != gt.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "measurement lists differ in length: " + std::to_string(pred.size()) + " vs " +
                    std::to_string(gt.size()),
                "gt");
  }
  MeasurementErrors e;
  if (pred.empty()) return e;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    e.height_mm += std::abs(pred[i].height - gt[i].height);
    e.weight_kg += std::abs(pred[i].weight - gt[i].weight);
    e.chest_mm += std::abs(pred[i].chest_circ - gt[i].chest_circ);
    e.waist_mm += std::abs(pred[i].waist_circ - gt[i].waist_circ);
    e.hip_mm += std::abs(pred[i].hip_circ - gt[i].hip_circ);
  }
  const double n = static_cast<double>(pred.size());
  e.height_mm *= 1000.0 / n;
  e.weight_kg /= n;
  e.chest_mm *= 1000.0 / n;
  e.waist_mm *= 1000.0 / n;
  e.hip_mm *= 1000.0 / n;
  return e;
}

int attribute_class(double score) {
  const double c = std::floor(score + 0.5);
  return static_cast<int>(std::clamp(c, 1.0, 5.0));
}

S2aAccuracy s2a_accuracy(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& gt, const std::vector<std::string>& names) {
  if (pred.rows() != gt.rows() || pred.cols() != gt.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "score matrices differ in shape", "gt");
  }
  if (!names.empty() && static_cast<Eigen::Index>(names.size()) != gt.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "attribute name count does not match columns", "names");
  }
  S2aAccuracy out;
  const Eigen::Index n = pred.rows();
  std::size_t hits = 0;
  for (Eigen::Index a = 0; a < pred.cols(); ++a) {
    AttributeAccuracy attr;
    attr.name = names.empty() ? "attr" + std::to_string(a) : names[static_cast<std::size_t>(a)];
    std::size_t col_hits = 0;
    double sum = 0.0, sum_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (attribute_class(pred(i, a)) == attribute_class(gt(i, a))) ++col_hits;
      const double d = std::abs(pred(i, a) - gt(i, a));
      sum += d;
      sum_sq += d * d;
    }
    if (n > 0) {
      attr.accuracy = static_cast<double>(col_hits) / static_cast<double>(n);
      attr.mae = sum / static_cast<double>(n);
      attr.mae_sd = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - attr.mae * attr.mae));
    }
    hits += col_hits;
    out.per_attribute.push_back(std::move(attr));
  }
  const double total = static_cast<double>(pred.size());
  out.accuracy = total > 0 ? static_cast<double>(hits) / total : 0.0;
  return out;
}

double ShapeErrorReport::mean_p2p20k() const {
  if (p2p20k_mm.empty()) return 0.0;
  double s = 0.0;
  for (double v : p2p20k_mm) s += v;
  return s / static_cast<double>(p2p20k_mm.size());
}

std::optional<double> ShapeErrorReport::mean_v2v() const {
  double s = 0.0;
  std::size_t n = 0;
  for (const auto& v : v2v_mm) {
    if (!v) return std::nullopt;
    s += *v;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return s / static_cast<double>(n);
}

}  // namespace shapekit
