// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shapekit/anthropometry.hpp"
#include "shapekit/body_model.hpp"
#include "shapekit/poly_mapper.hpp"

namespace shapekit {

struct LossWeights {
  double attr = 1.0;
  double height = 1.0;
  double circ = 1.0;
  double reg = 1e-4;
};

// Targets for the inverse problem. At least one of them must be present.
struct FitTargets {
  std::optional<Eigen::VectorXd> attributes;
  std::optional<double> height;  // m
  std::optional<double> chest;   // m
  std::optional<double> waist;   // m
  std::optional<double> hip;     // m
  LossWeights weights;

  bool has_circumference() const { return chest || waist || hip; }
  void validate() const;
};

struct LossTerms {
  double attr = 0.0;
  double height = 0.0;
  double circ = 0.0;
  double reg = 0.0;

  double total() const { return attr + height + circ + reg; }
};

// total = w_attr ||A - S2A(beta)||^2 + w_height (H - H(beta))^2
//       + w_circ sum_i (C_i - C_i(beta))^2 + w_reg ||beta||^2
//
// S2A enters unclamped so the energy stays smooth. The loss is also kept in
// least-squares form: total = ||residuals||^2 with d residuals / d beta =
// jacobian.
struct LossEvaluation {
  double total = 0.0;
  LossTerms terms;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;  // empty unless gradients were requested
  Eigen::VectorXd gradient;  // 2 J^T r, empty unless requested
  bool non_smooth = false;
};

LossEvaluation shapy_loss(const BodyModel& model, const PolyMapper* s2a_mapper, const ShapeVector& beta,
                          const FitTargets& targets, bool with_gradient = true,
                          const MeasureOptions& options = {});

enum class StepRule {
  // Levenberg-Marquardt damped Gauss-Newton; a step is accepted only if it
  // does not increase the loss.
  gauss_newton,
  // Steepest descent with Armijo backtracking.
  gradient_descent,
};

struct FitConfig {
  int max_iters = 200;
  StepRule step_rule = StepRule::gauss_newton;
  // Converged once an accepted step changes the loss by less than this.
  double tolerance = 1e-10;
  int max_backtracks = 40;
  MeasureOptions measure;
};

struct FitMappers {
  const PolyMapper* s2a = nullptr;
  // Candidate initializers (A2S family). The one whose input channels match
  // the available targets exactly is used.
  std::vector<const PolyMapper*> initializers;
};

struct FitResult {
  ShapeVector beta;
  double loss = 0.0;
  LossTerms terms;
  int iterations = 0;
  bool converged = false;
  int non_smooth_encounters = 0;
  // Accepted loss after initialization and after every iteration.
  std::vector<double> loss_history;
  // Variant name of the initializing mapper, or "zeros".
  std::string init;
};

// Picks the initializer matching `targets`, or nullptr.
const PolyMapper* select_initializer(const FitMappers& mappers, const FitTargets& targets);

FitResult fit_shape(const BodyModel& model, const FitMappers& mappers, const FitTargets& targets,
                    const FitConfig& config = {});

// Same as above with an explicit starting point.
FitResult fit_shape_from(const BodyModel& model, const PolyMapper* s2a_mapper, const FitTargets& targets,
                         ShapeVector initial, const FitConfig& config = {});

}  // namespace shapekit
