// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/fixture.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <json.hpp>

#include "shapekit/error.hpp"
#include "shapekit/primitives.hpp"
#include "shapekit/random.hpp"

namespace shapekit {
namespace {

constexpr double kTopY = 1.75;
constexpr double kChestY = 1.25;
constexpr double kWaistY = 1.05;
constexpr double kHipY = 0.92;

// Half width (x), half depth (z), leg pinch, arm lobe length.
struct Section {
  double y, a, b, pinch, arm;
};

constexpr std::array<Section, 14> kProfile{{
    {0.00, 0.07, 0.05, 0.60, 0.0},
    {0.05, 0.12, 0.08, 0.60, 0.0},
    {0.10, 0.10, 0.05, 0.60, 0.0},
    {0.45, 0.13, 0.06, 0.55, 0.0},
    {0.75, 0.17, 0.09, 0.45, 0.0},
    {0.92, 0.18, 0.11, 0.15, 0.0},
    {1.05, 0.14, 0.095, 0.0, 0.0},
    {1.25, 0.165, 0.115, 0.0, 0.0},
    {1.38, 0.20, 0.10, 0.0, 0.55},
    {1.45, 0.12, 0.08, 0.0, 0.0},
    {1.50, 0.055, 0.055, 0.0, 0.0},
    {1.58, 0.085, 0.10, 0.0, 0.0},
    {1.66, 0.09, 0.10, 0.0, 0.0},
    {1.75, 0.04, 0.05, 0.0, 0.0},
}};

Section section_at(double y) {
  if (y <= kProfile.front().y) return kProfile.front();
  for (std::size_t i = 1; i < kProfile.size(); ++i) {
    if (y <= kProfile[i].y) {
      const auto& p = kProfile[i - 1];
      const auto& q = kProfile[i];
      const double s = (y - p.y) / (q.y - p.y);
      auto lerp = [s](double u, double v) { return u + s * (v - u); };
      // Arms are a slab, not a ramp.
      const double arm = (y >= 1.34 && y <= 1.43) ? 0.55 : 0.0;
      return {y, lerp(p.a, q.a), lerp(p.b, q.b), lerp(p.pinch, q.pinch), arm};
    }
  }
  return kProfile.back();
}

double gaussian(double y, double mu, double sigma) {
  const double d = (y - mu) / sigma;
  return std::exp(-0.5 * d * d);
}

double round_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

std::size_t nearest_ring(const std::vector<double>& ys, double target) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < ys.size(); ++j) {
    if (std::abs(ys[j] - target) < std::abs(ys[best] - target)) best = j;
  }
  return best;
}

}  // namespace

BodyModel make_fixture_model(const FixtureOptions& opts) {
  if (opts.angular < 8 || opts.angular % 4 != 0 || opts.rings < 10) {
    throw Error(ErrorCode::invalid_argument, "fixture needs angular >= 8 (multiple of 4) and rings >= 10");
  }
  const int m = opts.angular;
  const int r = opts.rings;
  std::vector<double> ys(static_cast<std::size_t>(r));
  for (int j = 0; j < r; ++j) ys[static_cast<std::size_t>(j)] = kTopY * (j + 1) / (r + 1);
  const double wobble = 0.04 * kTopY / (r + 1);

  std::vector<std::vector<Vec3>> rings;
  for (int j = 0; j < r; ++j) {
    const Section s = section_at(ys[static_cast<std::size_t>(j)]);
    std::vector<Vec3> ring;
    for (int i = 0; i < m; ++i) {
      const double theta = 2.0 * std::numbers::pi * i / m;
      const double c = std::cos(theta);
      const double sn = std::sin(theta);
      const double pinch = 1.0 - s.pinch * sn * sn;
      const double lobe = s.arm * std::pow(c, 16);
      const double x = s.a * c * pinch + lobe * (c >= 0 ? 1.0 : -1.0);
      const double z = s.b * sn * pinch;
      const double y = s.y + wobble * std::sin(3.0 * theta + 0.7 * j);
      ring.emplace_back(round_f32(x), round_f32(y), round_f32(z));
    }
    rings.push_back(std::move(ring));
  }
  const TriangleMesh mesh = make_ring_stack(rings, Vec3(0.0, 0.0, 0.0), Vec3(0.0, kTopY, 0.0));

  // make_ring_stack numbers the bottom pole after the rings, then the top.
  const auto n = static_cast<Eigen::Index>(mesh.num_vertices());
  const auto& v = mesh.vertices();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(3 * n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = v(i, 0), y = v(i, 1), z = v(i, 2);
    basis(3 * i + 1, 0) = 0.05 * y;
    basis(3 * i + 0, 1) = 0.08 * x;
    basis(3 * i + 2, 1) = 0.08 * z;
    const double gc = 0.06 * gaussian(y, kChestY, 0.08);
    basis(3 * i + 0, 2) = gc * x;
    basis(3 * i + 2, 2) = gc * z;
    const double gh = 0.07 * gaussian(y, kHipY, 0.07);
    basis(3 * i + 0, 3) = gh * x;
    basis(3 * i + 2, 3) = gh * z;
  }
  basis = basis.unaryExpr([](double b) { return round_f32(b); });

  LandmarkSet lm;
  const auto ring_vertex = [m](std::size_t ring, int i) { return static_cast<std::uint32_t>(ring * m + i); };
  const int front = m / 4;  // theta = pi/2, the +z side
  lm.chest = ring_vertex(nearest_ring(ys, kChestY), front);
  lm.waist = ring_vertex(nearest_ring(ys, kWaistY), front);
  lm.hip = ring_vertex(nearest_ring(ys, kHipY), front);
  lm.left_heel = static_cast<std::uint32_t>(r * m);
  lm.head_top = static_cast<std::uint32_t>(r * m + 1);
  if (v(lm.left_heel, 1) != 0.0 || v(lm.head_top, 1) != kTopY) {
    throw Error(ErrorCode::invalid_mesh, "ring stack pole numbering changed");
  }

  BodyModel model(mesh, std::move(basis), Gender::neutral, lm);
  nlohmann::json meta = {{"generator", kFixtureName},
                         {"angular", m},
                         {"rings", r},
                         {"basis", {"taller", "heavier", "broader_chest", "wider_hips"}},
                         {"landmark_notes",
                          "chest, waist and hip are the front (+z) vertex of the ring nearest y = 1.25, 1.05, 0.92; "
                          "left_heel and head_top are the bottom and top poles"}};
  if (m == FixtureOptions{}.angular && r == FixtureOptions{}.rings) {
    const MeasurementSet ref = fixture_reference_measurements();
    meta["reference_measurements"] = {{"height_m", ref.height},     {"weight_kg", ref.weight},
                                      {"chest_m", ref.chest_circ}, {"waist_m", ref.waist_circ},
                                      {"hip_m", ref.hip_circ}};
  }
  model.set_metadata_json(meta.dump());
  return model;
}

MeasurementSet fixture_reference_measurements() {
  // Circumferences: support-function integral at 16384 angles, good to
  // about 5e-10 m. Weight: 985 kg/m^3 times the long-double volume.
  MeasurementSet m;
  m.height = 1.75;
  m.weight = 53.6319355968;
  m.chest_circ = 0.901064059;
  m.waist_circ = 0.753493807;
  m.hip_circ = 0.866959933;
  return m;
}

const std::vector<std::string>& fixture_attribute_names() {
  static const std::vector<std::string> names = {
      "big",         "broad_shoulders", "long_legs", "long_neck",   "long_torso",
      "muscular",    "pear_shaped",     "petite",    "short",       "short_arms",
      "skinny_legs", "slim_waist",      "tall",      "curvy",       "average"};
  return names;
}

FixturePopulation make_fixture_population(const BodyModel& model, const FixturePopulationOptions& opts) {
  if (opts.raters == 0) throw Error(ErrorCode::invalid_argument, "need at least one rater", "raters");
  const auto& names = fixture_attribute_names();
  const std::size_t a = names.size();
  const int b = model.num_betas();
  CounterRng rng(opts.seed);
  CounterRng beta_rng = rng.fork(1);
  CounterRng rate_rng = rng.fork(2);

  TrainingSet set;
  set.attribute_names = names;
  set.num_betas = b;
  std::vector<MeasurementSet> meas;
  for (std::size_t i = 0; i < opts.subjects; ++i) {
    SubjectSample s;
    s.id = "s" + std::to_string(i);
    s.gender = model.gender();
    s.betas.resize(b);
    for (int k = 0; k < b; ++k) s.betas[k] = opts.beta_sd * beta_rng.next_normal();
    const MeasurementSet m = measure(model, s.betas);
    s.height = m.height;
    s.weight = m.weight;
    s.chest = m.chest_circ;
    s.waist = m.waist_circ;
    s.hip = m.hip_circ;
    meas.push_back(m);
    set.samples.push_back(std::move(s));
  }

  // Latent scores from standardized measurements.
  std::array<double, 5> mean{}, sd{};
  for (const auto& m : meas) {
    const auto v = m.as_array();
    for (int k = 0; k < 5; ++k) mean[k] += v[k];
  }
  for (auto& x : mean) x /= std::max<std::size_t>(1, meas.size());
  for (const auto& m : meas) {
    const auto v = m.as_array();
    for (int k = 0; k < 5; ++k) sd[k] += (v[k] - mean[k]) * (v[k] - mean[k]);
  }
  for (auto& x : sd) x = std::sqrt(x / std::max<std::size_t>(1, meas.size())) + 1e-12;

  // Loadings on (height, weight, chest, waist, hip); rows follow `names`.
  static constexpr double kLoad[15][5] = {
      {0.3, 1.0, 0.3, 0.3, 0.3},   {0.2, 0.3, 1.0, 0.0, -0.2}, {0.9, 0.0, 0.0, 0.0, -0.2},
      {0.6, -0.2, 0.0, 0.0, 0.0},  {0.7, 0.0, 0.2, 0.0, -0.1}, {0.0, 0.5, 0.8, -0.4, 0.0},
      {0.0, 0.2, -0.5, 0.0, 1.0},  {-1.0, -0.6, 0.0, 0.0, 0.0}, {-1.2, 0.0, 0.0, 0.0, 0.0},
      {-0.6, 0.0, 0.0, 0.0, 0.0},  {0.0, -0.7, 0.0, 0.0, -0.4}, {0.0, -0.3, 0.2, -1.0, 0.0},
      {1.2, 0.0, 0.0, 0.0, 0.0},   {0.0, 0.3, 0.5, -0.6, 0.8}, {-0.3, -0.3, 0.0, 0.0, 0.0}};

  std::vector<std::uint8_t> scores(opts.subjects * a * opts.raters);
  for (std::size_t i = 0; i < opts.subjects; ++i) {
    const auto v = meas[i].as_array();
    std::array<double, 5> z{};
    for (int k = 0; k < 5; ++k) z[k] = (v[k] - mean[k]) / sd[k];
    for (std::size_t j = 0; j < a; ++j) {
      double t = 0.0;
      for (int k = 0; k < 5; ++k) t += kLoad[j][k] * z[k];
      const double latent = 3.0 + 1.6 * std::tanh(0.6 * t);
      for (std::size_t k = 0; k < opts.raters; ++k) {
        const double x = std::round(latent + opts.rater_noise * rate_rng.next_normal());
        scores[(i * a + j) * opts.raters + k] = static_cast<std::uint8_t>(std::clamp(x, 1.0, 5.0));
      }
    }
  }
  RatingMatrix ratings(opts.subjects, names, opts.raters, std::move(scores), model.gender());
  const AttributeScores agg = aggregate_ratings(ratings);
  for (std::size_t i = 0; i < opts.subjects; ++i) set.samples[i].attributes = agg.row(static_cast<Eigen::Index>(i)).transpose();
  return {std::move(set), std::move(ratings)};
}

}  // namespace shapekit
