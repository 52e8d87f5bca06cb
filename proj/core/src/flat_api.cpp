// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/flat_api.hpp"

#include <cmath>

#include "shapekit/anthropometry.hpp"
#include "shapekit/error.hpp"
#include "shapekit/metrics.hpp"
#include "shapekit/model_archive.hpp"
#include "shapekit/shape_fitter.hpp"

namespace shapekit::flat {

void check_shape(std::span<const double> values, std::size_t rows, std::size_t cols, const std::string& what) {
  if (values.size() != rows * cols) {
    throw Error(ErrorCode::dimension_mismatch,
                "expected " + std::to_string(rows) + " x " + std::to_string(cols) + " values, got " +
                    std::to_string(values.size()),
                what);
  }
}

Session::Session(const std::filesystem::path& archive) : model_(load_model(archive)) {}

Session::Session(BodyModel model) : model_(std::move(model)) {}

void Session::check_open() const {
  if (closed_) throw Error(ErrorCode::invalid_argument, "session is closed");
}

ShapeVector Session::to_beta(std::span<const double> values, const std::string& what) const {
  check_shape(values, 1, static_cast<std::size_t>(model_.num_betas()), what);
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Array Session::measure(std::span<const double> betas, std::size_t rows) const {
  check_open();
  const auto b = static_cast<std::size_t>(model_.num_betas());
  check_shape(betas, rows, b, "betas");
  Array out{std::vector<double>(rows * 5), {rows, 5}};
  for (std::size_t i = 0; i < rows; ++i) {
    const auto m = shapekit::measure(model_, to_beta(betas.subspan(i * b, b), "betas")).as_array();
    std::copy(m.begin(), m.end(), out.data.begin() + static_cast<std::ptrdiff_t>(5 * i));
  }
  return out;
}

Array Session::measure_gradients(std::span<const double> beta) const {
  check_open();
  const auto g = shapekit::measure_gradients(model_, to_beta(beta, "beta"));
  const auto b = static_cast<std::size_t>(model_.num_betas());
  Array out{std::vector<double>(5 * b), {5, b}};
  const Eigen::VectorXd* rows[5] = {&g.height, &g.weight, &g.chest_circ, &g.waist_circ, &g.hip_circ};
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t k = 0; k < b; ++k) out.data[r * b + k] = (*rows[r])[static_cast<Eigen::Index>(k)];
  }
  return out;
}

double Session::p2p20k(std::span<const double> beta1, std::span<const double> beta2) {
  check_open();
  if (!regressor_) {
    regressor_ = std::make_unique<PointRegressor>(build_point_regressor(model_.template_mesh()));
  }
  return shapekit::p2p20k(*regressor_, model_.shaped_vertices(to_beta(beta1, "beta1")), *regressor_,
                          model_.shaped_vertices(to_beta(beta2, "beta2")));
}

Array Session::fit_shape(std::span<const double> targets, std::span<const double> attributes,
                         const PolyMapper* s2a_mapper) const {
  check_open();
  check_shape(targets, 1, 4, "targets");
  FitTargets t;
  auto opt = [](double v) { return std::isnan(v) ? std::nullopt : std::optional<double>(v); };
  t.height = opt(targets[0]);
  t.chest = opt(targets[1]);
  t.waist = opt(targets[2]);
  t.hip = opt(targets[3]);
  if (!attributes.empty()) {
    t.attributes = Eigen::Map<const Eigen::VectorXd>(attributes.data(), static_cast<Eigen::Index>(attributes.size()));
  }
  FitMappers mappers;
  mappers.s2a = s2a_mapper;
  const FitResult r = shapekit::fit_shape(model_, mappers, t);
  return {std::vector<double>(r.beta.data(), r.beta.data() + r.beta.size()), {static_cast<std::size_t>(r.beta.size())}};
}

void Session::close() {
  closed_ = true;
  regressor_.reset();
}

PolyMapper fit_mapper(std::span<const double> inputs, std::span<const double> targets, std::size_t rows,
                      const std::string& variant, const ChannelLayout& layout, double ridge) {
  const FeatureSpec spec = FeatureSpec::from_variant(variant);
  const OutputKind kind = variant_output(variant);
  const std::size_t m = input_dim(spec, layout);
  const std::size_t o = kind == OutputKind::betas ? static_cast<std::size_t>(layout.num_betas)
                                                  : static_cast<std::size_t>(layout.num_attributes);
  check_shape(inputs, rows, m, "inputs");
  check_shape(targets, rows, o, "targets");
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::MatrixXd x = Eigen::Map<const RowMajor>(inputs.data(), static_cast<Eigen::Index>(rows),
                                                       static_cast<Eigen::Index>(m));
  const Eigen::MatrixXd y = Eigen::Map<const RowMajor>(targets.data(), static_cast<Eigen::Index>(rows),
                                                       static_cast<Eigen::Index>(o));
  return shapekit::fit_mapper(x, y, spec, layout, kind, ridge);
}

Array apply_mapper(const PolyMapper& mapper, std::span<const double> inputs, std::size_t rows) {
  const std::size_t m = mapper.input_dim();
  const std::size_t o = mapper.output_dim();
  check_shape(inputs, rows, m, "inputs");
  Array out{std::vector<double>(rows * o), {rows, o}};
  for (std::size_t i = 0; i < rows; ++i) {
    const Eigen::VectorXd y = mapper.apply(
        Eigen::Map<const Eigen::VectorXd>(inputs.data() + i * m, static_cast<Eigen::Index>(m)));
    std::copy(y.data(), y.data() + o, out.data.begin() + static_cast<std::ptrdiff_t>(i * o));
  }
  return out;
}

}  // namespace shapekit::flat
