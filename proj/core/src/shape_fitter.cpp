// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/shape_fitter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "shapekit/error.hpp"

namespace shapekit {

void FitTargets::validate() const {
  if (!attributes && !height && !has_circumference()) {
    throw Error(ErrorCode::invalid_argument, "fit needs at least one target", "targets");
  }
  const std::pair<const char*, double> ws[] = {
      {"attr", weights.attr}, {"height", weights.height}, {"circ", weights.circ}, {"reg", weights.reg}};
  for (const auto& [name, w] : ws) {
    if (!(w >= 0.0)) throw Error(ErrorCode::invalid_argument, "loss weight must be >= 0", std::string("weights.") + name);
  }
}

LossEvaluation shapy_loss(const BodyModel& model, const PolyMapper* s2a_mapper, const ShapeVector& beta,
                          const FitTargets& targets, bool with_gradient, const MeasureOptions& options) {
  targets.validate();
  if (beta.size() != model.num_betas()) {
    throw Error(ErrorCode::dimension_mismatch, "beta length does not match model", "beta");
  }
  if (targets.attributes && !s2a_mapper) {
    throw Error(ErrorCode::invalid_argument, "attribute target given without a shape-to-attributes mapper", "s2a");
  }
  const Eigen::Index b = beta.size();
  const Eigen::Index num_attr = targets.attributes ? targets.attributes->size() : 0;
  const int num_circ = (targets.chest ? 1 : 0) + (targets.waist ? 1 : 0) + (targets.hip ? 1 : 0);
  const Eigen::Index m = num_attr + (targets.height ? 1 : 0) + num_circ + b;

  LossEvaluation out;
  out.residuals.resize(m);
  if (with_gradient) out.jacobian.setZero(m, b);
  Eigen::Index row = 0;

  if (targets.attributes) {
    if (s2a_mapper->output_dim() != static_cast<std::size_t>(num_attr)) {
      throw Error(ErrorCode::dimension_mismatch, "attribute target length differs from S2A output", "attributes");
    }
    const double w = std::sqrt(targets.weights.attr);
    const Eigen::VectorXd pred = s2a_mapper->apply(beta);
    out.residuals.segment(row, num_attr) = w * (pred - *targets.attributes);
    if (with_gradient) out.jacobian.middleRows(row, num_attr) = w * s2a_mapper->apply_jacobian(beta);
    out.terms.attr = out.residuals.segment(row, num_attr).squaredNorm();
    row += num_attr;
  }

  if (targets.height || num_circ > 0) {
    if (with_gradient) {
      const MeasurementGradients g = measure_gradients(model, beta, options);
      out.non_smooth = g.non_smooth();
      if (targets.height) {
        const double w = std::sqrt(targets.weights.height);
        out.residuals[row] = w * (g.values.height - *targets.height);
        out.jacobian.row(row) = w * g.height.transpose();
        out.terms.height = out.residuals[row] * out.residuals[row];
        ++row;
      }
      const std::tuple<const std::optional<double>*, double, const Eigen::VectorXd*> circs[] = {
          {&targets.chest, g.values.chest_circ, &g.chest_circ},
          {&targets.waist, g.values.waist_circ, &g.waist_circ},
          {&targets.hip, g.values.hip_circ, &g.hip_circ}};
      const double w = std::sqrt(targets.weights.circ);
      for (const auto& [target, value, grad] : circs) {
        if (!*target) continue;
        out.residuals[row] = w * (value - **target);
        out.jacobian.row(row) = w * grad->transpose();
        out.terms.circ += out.residuals[row] * out.residuals[row];
        ++row;
      }
    } else {
      const TriangleMesh mesh = model.shaped_mesh(beta);
      const auto& lm = model.landmarks();
      if (targets.height) {
        const double w = std::sqrt(targets.weights.height);
        out.residuals[row] = w * (height(mesh, lm) - *targets.height);
        out.terms.height = out.residuals[row] * out.residuals[row];
        ++row;
      }
      const std::pair<const std::optional<double>*, std::uint32_t> circs[] = {
          {&targets.chest, lm.chest}, {&targets.waist, lm.waist}, {&targets.hip, lm.hip}};
      const double w = std::sqrt(targets.weights.circ);
      for (const auto& [target, landmark] : circs) {
        if (!*target) continue;
        out.residuals[row] = w * (circumference(mesh, landmark, options.torso_only) - **target);
        out.terms.circ += out.residuals[row] * out.residuals[row];
        ++row;
      }
    }
  }

  const double wr = std::sqrt(targets.weights.reg);
  out.residuals.segment(row, b) = wr * beta;
  if (with_gradient) out.jacobian.middleRows(row, b) = wr * Eigen::MatrixXd::Identity(b, b);
  out.terms.reg = targets.weights.reg * beta.squaredNorm();

  out.total = out.terms.total();
  if (with_gradient) out.gradient = 2.0 * out.jacobian.transpose() * out.residuals;
  return out;
}

const PolyMapper* select_initializer(const FitMappers& mappers, const FitTargets& targets) {
  std::vector<Channel> wanted;
  if (targets.attributes) wanted.push_back(Channel::attributes);
  if (targets.height) wanted.push_back(Channel::height);
  if (targets.chest && targets.waist && targets.hip) {
    wanted.insert(wanted.end(), {Channel::chest, Channel::waist, Channel::hip});
  }
  for (const PolyMapper* m : mappers.initializers) {
    if (m && m->output_kind() == OutputKind::betas && m->spec().channels == wanted) {
      if (targets.attributes && m->layout().num_attributes != targets.attributes->size()) continue;
      return m;
    }
  }
  return nullptr;
}

namespace {

Eigen::VectorXd initializer_input(const PolyMapper& mapper, const FitTargets& t) {
  std::vector<double> v;
  for (Channel c : mapper.spec().channels) {
    switch (c) {
      case Channel::attributes:
        v.insert(v.end(), t.attributes->data(), t.attributes->data() + t.attributes->size());
        break;
      case Channel::height: v.push_back(*t.height); break;
      case Channel::chest: v.push_back(*t.chest); break;
      case Channel::waist: v.push_back(*t.waist); break;
      case Channel::hip: v.push_back(*t.hip); break;
      default: break;
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

[[noreturn]] void diverged(const std::vector<double>& history, int iteration) {
  std::ostringstream trace;
  trace << "loss trace:";
  const std::size_t from = history.size() > 10 ? history.size() - 10 : 0;
  for (std::size_t i = from; i < history.size(); ++i) trace << ' ' << history[i];
  throw Error(ErrorCode::divergence, "loss became non-finite at iteration " + std::to_string(iteration),
              trace.str());
}

}  // namespace

FitResult fit_shape(const BodyModel& model, const FitMappers& mappers, const FitTargets& targets,
                    const FitConfig& config) {
  targets.validate();
  ShapeVector init = ShapeVector::Zero(model.num_betas());
  std::string source = "zeros";
  if (const PolyMapper* m = select_initializer(mappers, targets)) {
    const Eigen::VectorXd pred = m->apply(initializer_input(*m, targets));
    if (pred.size() == init.size() && pred.allFinite()) {
      init = pred;
      source = m->spec().variant_name();
    }
  }
  FitResult r = fit_shape_from(model, mappers.s2a, targets, std::move(init), config);
  r.init = source;
  return r;
}

FitResult fit_shape_from(const BodyModel& model, const PolyMapper* s2a_mapper, const FitTargets& targets,
                         ShapeVector initial, const FitConfig& config) {
  FitResult result;
  result.init = "explicit";
  ShapeVector beta = std::move(initial);
  LossEvaluation current = shapy_loss(model, s2a_mapper, beta, targets, true, config.measure);
  if (!std::isfinite(current.total)) diverged({current.total}, 0);
  result.loss_history.push_back(current.total);

  const Eigen::Index b = beta.size();
  double damping = 1e-6;
  double step = 1.0;

  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    if (current.non_smooth) ++result.non_smooth_encounters;
    if (current.total == 0.0 || current.gradient.norm() == 0.0) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    LossEvaluation trial;
    ShapeVector candidate;
    if (config.step_rule == StepRule::gauss_newton) {
      const Eigen::MatrixXd jtj = current.jacobian.transpose() * current.jacobian;
      const Eigen::VectorXd jtr = current.jacobian.transpose() * current.residuals;
      const double scale = std::max(jtj.diagonal().maxCoeff(), 1e-12);
      // Subgradient at a hull-combinatorics change: halve the step.
      const double alpha = current.non_smooth ? 0.5 : 1.0;
      for (int k = 0; k < config.max_backtracks; ++k) {
        const Eigen::MatrixXd lhs = jtj + (damping * scale) * Eigen::MatrixXd::Identity(b, b);
        const Eigen::VectorXd delta = lhs.ldlt().solve(-jtr);
        candidate = beta + alpha * delta;
        trial = shapy_loss(model, s2a_mapper, candidate, targets, false, config.measure);
        if (std::isfinite(trial.total) && trial.total <= current.total) {
          accepted = true;
          damping = std::max(damping / 3.0, 1e-15);
          break;
        }
        damping *= 4.0;
      }
    } else {
      const Eigen::VectorXd& g = current.gradient;
      double alpha = step * (current.non_smooth ? 0.5 : 1.0);
      for (int k = 0; k < config.max_backtracks; ++k) {
        candidate = beta - alpha * g;
        trial = shapy_loss(model, s2a_mapper, candidate, targets, false, config.measure);
        if (std::isfinite(trial.total) && trial.total <= current.total - 1e-4 * alpha * g.squaredNorm()) {
          accepted = true;
          step = 2.0 * alpha;
          break;
        }
        alpha *= 0.5;
      }
    }

    if (!accepted) {
      if (!std::isfinite(trial.total)) diverged(result.loss_history, iter + 1);
      // No descent step found: stationary to working precision.
      result.converged = current.gradient.norm() < 1e-8;
      break;
    }
    const double change = current.total - trial.total;
    beta = candidate;
    current = shapy_loss(model, s2a_mapper, beta, targets, true, config.measure);
    if (!std::isfinite(current.total)) diverged(result.loss_history, iter + 1);
    result.loss_history.push_back(current.total);
    if (change < config.tolerance) {
      result.converged = true;
      ++iter;
      break;
    }
  }

  result.beta = beta;
  result.loss = current.total;
  result.terms = current.terms;
  result.iterations = iter;
  return result;
}

}  // namespace shapekit
