// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include "shapekit/body_model.hpp"
#include "shapekit/error.hpp"
#include "shapekit/fixture.hpp"
#include "shapekit/primitives.hpp"
#include "shapekit/random.hpp"

namespace shapekit {
namespace {

// Rings at y = 0, .25, .5, .75, 1 with four corners each; corner 0 of each
// ring is vertex 4k.
BodyModel banded_cube_model(Eigen::MatrixXd basis = {}) {
  TriangleMesh cube = make_banded_cube(4);
  if (basis.size() == 0) basis = Eigen::MatrixXd::Zero(3 * 20, 1);
  return BodyModel(cube, basis, Gender::neutral, {16, 0, 12, 8, 4});
}

TEST(BodyModel, ZeroBetaGivesTemplate) {
  const BodyModel m = make_fixture_model();
  const Vertices v = m.shaped_vertices(ShapeVector::Zero(4));
  EXPECT_TRUE((v.array() == m.template_mesh().vertices().array()).all());
}

TEST(BodyModel, UnitBetaAddsBasisColumn) {
  const BodyModel m = make_fixture_model();
  for (int b = 0; b < 4; ++b) {
    const Vertices v = m.shaped_vertices(ShapeVector::Unit(4, b));
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      for (int c = 0; c < 3; ++c) {
        ASSERT_EQ(v(i, c), m.template_mesh().vertices()(i, c) + m.shape_basis()(3 * i + c, b));
      }
    }
  }
}

TEST(BodyModel, Superposition) {
  const BodyModel m = make_fixture_model();
  CounterRng rng(1);
  const Vertices t = m.template_mesh().vertices();
  for (int trial = 0; trial < 10; ++trial) {
    ShapeVector b1(4), b2(4);
    for (int k = 0; k < 4; ++k) b1[k] = rng.next_normal(), b2[k] = rng.next_normal();
    const double a = rng.next_normal(), b = rng.next_normal();
    const Vertices lhs = m.shaped_vertices(a * b1 + b * b2) - t;
    const Vertices rhs = a * (m.shaped_vertices(b1) - t) + b * (m.shaped_vertices(b2) - t);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(BodyModel, JacobianMatchesCentralDifferences) {
  const BodyModel m = make_fixture_model();
  std::vector<std::uint32_t> subset;
  for (std::uint32_t v = 0; v < m.num_vertices(); v += 37) subset.push_back(v);
  const Eigen::MatrixXd jac = m.shaped_mesh_jacobian(subset);
  CounterRng rng(2);
  ShapeVector beta(4);
  for (int k = 0; k < 4; ++k) beta[k] = rng.next_normal();
  const double eps = 1e-6;
  double worst = 0.0;
  for (int b = 0; b < 4; ++b) {
    const Vertices p = m.shaped_vertices(beta + eps * ShapeVector::Unit(4, b));
    const Vertices q = m.shaped_vertices(beta - eps * ShapeVector::Unit(4, b));
    for (std::size_t i = 0; i < subset.size(); ++i) {
      for (int c = 0; c < 3; ++c) {
        const double fd = (p(subset[i], c) - q(subset[i], c)) / (2 * eps);
        worst = std::max(worst, std::abs(fd - jac(3 * static_cast<Eigen::Index>(i) + c, b)));
      }
    }
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(BodyModel, ZeroBasisGivesZeroJacobian) {
  const BodyModel m = banded_cube_model();
  const std::uint32_t all[] = {0, 5, 19};
  EXPECT_TRUE(m.shaped_mesh_jacobian(all).isZero(0.0));
}

TEST(BodyModel, SingleVertexJacobianIsBasisEntry) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(60, 1);
  basis(3 * 7 + 0, 0) = 0.1;
  basis(3 * 7 + 1, 0) = -0.2;
  basis(3 * 7 + 2, 0) = 0.3;
  const BodyModel m = banded_cube_model(basis);
  const std::uint32_t one[] = {7};
  EXPECT_EQ(m.shaped_mesh_jacobian(one), basis.middleRows(21, 3));
}

TEST(BodyModel, Errors) {
  try {
    (void)banded_cube_model().shaped_vertices(ShapeVector::Zero(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  const std::uint32_t bad[] = {20};
  EXPECT_THROW((void)banded_cube_model().shaped_mesh_jacobian(bad), Error);
  EXPECT_THROW(banded_cube_model(Eigen::MatrixXd::Zero(57, 1)), Error);
  try {
    BodyModel(make_banded_cube(4), Eigen::MatrixXd::Zero(60, 1), Gender::male, {16, 0, 4, 8, 12});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::missing_landmark);
  }
  try {
    BodyModel(make_banded_cube(4), Eigen::MatrixXd::Zero(60, 1), Gender::male, {16, 0, 12, 8, 40});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.context(), "landmarks.hip");
  }
}

TEST(Gender, ParseRoundTrip) {
  for (Gender g : {Gender::female, Gender::male, Gender::neutral}) EXPECT_EQ(parse_gender(to_string(g)), g);
  EXPECT_THROW(parse_gender("other"), Error);
}

}  // namespace
}  // namespace shapekit
