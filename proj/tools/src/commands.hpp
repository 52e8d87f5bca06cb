// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shapekit/anthropometry.hpp"
#include "shapekit/curation.hpp"
#include "shapekit/fixture.hpp"
#include "shapekit/point_regressor.hpp"
#include "shapekit/poly_mapper.hpp"
#include "shapekit/shape_fitter.hpp"

namespace shapekit::cli {

struct Common {
  std::uint64_t seed = 0;
  bool deterministic = false;
  int jobs = 1;
};

// "fixture" names the built-in capsule-person model; anything else is an
// archive path.
BodyModel resolve_model(const std::string& spec);

struct FixtureArgs {
  std::string out;
  std::size_t subjects = FixturePopulationOptions{}.subjects;
  std::size_t raters = FixturePopulationOptions{}.raters;
  int angular = FixtureOptions{}.angular;
  int rings = FixtureOptions{}.rings;
  bool zip = false;
};
void cmd_fixture(const Common& c, const FixtureArgs& a, std::ostream& out);

struct MeasureArgs {
  std::string model;
  std::string betas;
  std::vector<std::string> meshes;
  std::vector<std::uint32_t> landmarks;  // head_top, left_heel, chest, waist, hip
  std::string out;
  double density = kDefaultBodyDensity;
  bool torso_only = false;
  bool gradients = false;
};
void cmd_measure(const Common& c, const MeasureArgs& a, std::ostream& out);

struct FitMapperArgs {
  std::string train;
  std::string variant;
  std::string gender;
  double ridge = kDefaultRidge;
  int degree = 2;
  std::string out;
};
void cmd_fit_mapper(const Common& c, const FitMapperArgs& a, std::ostream& out);

struct PredictArgs {
  std::string mapper;
  std::string input;
  std::string out;
};
void cmd_predict(const Common& c, const PredictArgs& a, std::ostream& out);

struct FitShapeArgs {
  std::string model;
  std::string targets;
  std::string s2a;
  std::vector<std::string> init;
  std::string out;
  std::string report;
  int max_iters = FitConfig{}.max_iters;
  std::string step = "gauss-newton";
  double tolerance = FitConfig{}.tolerance;
  double w_attr = LossWeights{}.attr;
  double w_height = LossWeights{}.height;
  double w_circ = LossWeights{}.circ;
  double w_reg = LossWeights{}.reg;
  bool torso_only = false;
};
void cmd_fit_shape(const Common& c, const FitShapeArgs& a, std::ostream& out);

struct EvalArgs {
  std::string model;
  std::string pred_model;
  std::string gt_model;
  std::string pred_betas;
  std::string gt_betas;
  std::string pred_meshes;  // text file, one path per line
  std::string gt_meshes;
  std::string pred_attrs;
  std::string gt_attrs;
  std::size_t points = kDefaultSurfacePoints;
  bool no_cache = false;
  std::string out;
  std::string json;
};
void cmd_eval(const Common& c, const EvalArgs& a, std::ostream& out);

struct DedupArgs {
  std::string a;
  std::string b;
  double tau = kDefaultMatchThreshold;
  bool strict = false;
  std::string out;
};
void cmd_dedup(const Common& c, const DedupArgs& a, std::ostream& out);

struct CurateArgs {
  std::string subjects;
  double bin_h = BalanceOptions{}.bin_h;
  double bin_w = BalanceOptions{}.bin_w;
  int cap = BalanceOptions{}.cap;
  std::optional<std::size_t> bmi_pick;
  std::string out;
};
void cmd_curate(const Common& c, const CurateArgs& a, std::ostream& out);

struct ReportArgs {
  std::string input;
  std::string format = "markdown";
  int precision = 2;
  std::string out;
};
void cmd_report(const Common& c, const ReportArgs& a, std::ostream& out);

}  // namespace shapekit::cli
