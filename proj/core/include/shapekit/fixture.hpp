// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shapekit/anthropometry.hpp"
#include "shapekit/body_model.hpp"
#include "shapekit/poly_mapper.hpp"
#include "shapekit/training_data.hpp"

namespace shapekit {

// Procedural "capsule-person": a stack of star-shaped rings from a heel
// pole at y = 0 to a head pole at y = 1.75, T-pose arm lobes at shoulder
// height, and legs joined into a pinched (non-convex) section. Rings carry
// a small sinusoidal wobble in y so that no ring is exactly planar.
//
// Basis directions, in order:
//   0 taller          y scaled by 5% per unit, heel fixed
//   1 heavier         x and z scaled by 8% per unit, y untouched
//   2 broader chest   x and z widened around chest height
//   3 wider hips      x and z widened around hip height
struct FixtureOptions {
  int angular = 64;  // vertices per ring
  int rings = 32;
};

inline constexpr const char* kFixtureName = "capsule-person";

// Vertices and basis are rounded to float32, as stored in the archive, so
// that a saved and reloaded fixture is identical to the generated one.
BodyModel make_fixture_model(const FixtureOptions& opts = {});

// Measurements of the default-resolution fixture at beta = 0, frozen from
// independent oracles (dense angular sampling for circumferences,
// long-double tetrahedron sums for volume). Also stored in the archive
// metadata under "reference_measurements".
MeasurementSet fixture_reference_measurements();

// Attribute vocabulary of the synthetic population.
const std::vector<std::string>& fixture_attribute_names();

struct FixturePopulationOptions {
  std::size_t subjects = 200;
  std::size_t raters = 15;
  double beta_sd = 1.0;
  double rater_noise = 0.6;  // SD of a single rating around the latent score
  std::uint64_t seed = 0;
};

// Synthetic subjects: beta ~ N(0, sd^2), measurements from the model, and
// 1..5 ratings from `raters` noisy raters around latent scores that are
// smooth functions of the measurements.
struct FixturePopulation {
  TrainingSet training;
  RatingMatrix ratings;
};

FixturePopulation make_fixture_population(const BodyModel& model, const FixturePopulationOptions& opts = {});

}  // namespace shapekit
