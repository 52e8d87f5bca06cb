// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "shapekit/anthropometry.hpp"
#include "shapekit/fixture.hpp"
#include "shapekit/primitives.hpp"
#include "shapekit/random.hpp"

namespace shapekit {
namespace {

double rel_err(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(1e-8, b.lpNorm<Eigen::Infinity>());
}

TEST(Gradients, ZeroBasisGivesZero) {
  const BodyModel cube(make_banded_cube(4), Eigen::MatrixXd::Zero(60, 1), Gender::neutral, {16, 0, 12, 8, 4});
  const MeasurementGradients g = measure_gradients(cube, ShapeVector::Zero(1));
  for (const auto* v : {&g.height, &g.weight, &g.chest_circ, &g.waist_circ, &g.hip_circ}) {
    EXPECT_TRUE(v->isZero(0.0));
  }
}

TEST(Gradients, HeightIsLandmarkJacobianDifference) {
  const BodyModel m = make_fixture_model();
  const auto& lm = m.landmarks();
  const Eigen::VectorXd want = m.vertex_jacobian(lm.head_top).row(1) - m.vertex_jacobian(lm.left_heel).row(1);
  EXPECT_EQ(measure_gradients(m, ShapeVector::Zero(4)).height, want);
}

TEST(Gradients, ValuesMatchMeasure) {
  const BodyModel m = make_fixture_model();
  const ShapeVector beta = ShapeVector::Constant(4, 0.3);
  const auto a = measure_gradients(m, beta).values.as_array();
  const auto b = measure(m, beta).as_array();
  for (int i = 0; i < 5; ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(Gradients, MatchFiniteDifferences) {
  const BodyModel m = make_fixture_model();
  CounterRng rng(11);
  int smooth = 0;
  for (int trial = 0; trial < 20; ++trial) {
    ShapeVector beta(4);
    for (int k = 0; k < 4; ++k) beta[k] = rng.next_normal();
    const MeasurementGradients g = measure_gradients(m, beta);
    const Eigen::VectorXd* analytic[] = {&g.height, &g.weight, &g.chest_circ, &g.waist_circ, &g.hip_circ};
    for (int q = 0; q < 5; ++q) {
      if (q >= 2 && g.circ_non_smooth[q - 2]) continue;
      const auto fd = testing::central_difference(
          [&](const Eigen::VectorXd& b) { return measure(m, b).as_array()[q]; }, beta, 1e-5);
      EXPECT_LT(rel_err(*analytic[q], fd), 1e-5) << "trial " << trial << " quantity " << q;
    }
    smooth += g.non_smooth() ? 0 : 1;
  }
  EXPECT_GE(smooth, 18);
}

TEST(Gradients, CircumferenceVertexGradientOnPrism) {
  // Scaling a prism radially by s scales the perimeter by s, so the
  // directional derivative along the radial field equals the perimeter.
  const TriangleMesh prism = make_prism(16, 0.2, 1.0, 3);
  const PlaneSection s = plane_section(prism, 0.5);
  const VertexGradient g = circumference_vertex_gradient(prism, s, 16);
  double dir = 0.0;
  for (const auto& [v, d] : g) {
    const Vec3 p = prism.vertices().row(v).transpose();
    dir += d.dot(Vec3(p.x(), 0.0, p.z()));
  }
  EXPECT_NEAR(dir, hull_length(prism, s), 1e-12);
}

}  // namespace
}  // namespace shapekit
