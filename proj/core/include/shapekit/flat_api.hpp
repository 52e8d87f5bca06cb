// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "shapekit/body_model.hpp"
#include "shapekit/poly_mapper.hpp"
#include "shapekit/point_regressor.hpp"

namespace shapekit::flat {

// Row-major float64 array with its logical shape. Language bindings move
// data through this type only.
struct Array {
  std::vector<double> data;
  std::vector<std::size_t> shape;
};

// Throws dimension_mismatch unless `values` holds rows * cols entries.
void check_shape(std::span<const double> values, std::size_t rows, std::size_t cols, const std::string& what);

// A loaded model plus a lazily built surface-point regressor. Not
// thread-safe; use one session per thread.
class Session {
 public:
  explicit Session(const std::filesystem::path& archive);
  explicit Session(BodyModel model);

  const BodyModel& model() const { return model_; }
  int num_betas() const { return model_.num_betas(); }

  // betas [rows x B] -> [rows x 5]: height_m, weight_kg, chest_m, waist_m, hip_m.
  Array measure(std::span<const double> betas, std::size_t rows) const;
  // beta [B] -> [5 x B].
  Array measure_gradients(std::span<const double> beta) const;
  // Mean surface distance in mm between two shapes of this model.
  double p2p20k(std::span<const double> beta1, std::span<const double> beta2);
  // targets [4]: height_m, chest_m, waist_m, hip_m; NaN marks an absent
  // target. attributes may be empty. -> beta [B].
  Array fit_shape(std::span<const double> targets, std::span<const double> attributes,
                  const PolyMapper* s2a_mapper = nullptr) const;

  void close();
  bool closed() const { return closed_; }

 private:
  void check_open() const;
  ShapeVector to_beta(std::span<const double> values, const std::string& what) const;

  BodyModel model_;
  std::unique_ptr<PointRegressor> regressor_;
  bool closed_ = false;
};

// inputs [rows x input_dim], targets [rows x out] for `variant` ("A2S", ...).
PolyMapper fit_mapper(std::span<const double> inputs, std::span<const double> targets, std::size_t rows,
                      const std::string& variant, const ChannelLayout& layout, double ridge = kDefaultRidge);
// inputs [rows x input_dim] -> [rows x output_dim].
Array apply_mapper(const PolyMapper& mapper, std::span<const double> inputs, std::size_t rows);

}  // namespace shapekit::flat
