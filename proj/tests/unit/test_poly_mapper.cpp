// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "shapekit/error.hpp"
#include "shapekit/poly_mapper.hpp"
#include "shapekit/random.hpp"
#include "test_paths.hpp"

namespace shapekit {
namespace {

Eigen::MatrixXd normal_matrix(CounterRng& rng, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = sd * rng.next_normal();
  }
  return m;
}

// Plain-loop expansion written independently of the library.
Eigen::VectorXd brute_features(const Eigen::VectorXd& x) {
  std::vector<double> f = {1.0};
  for (Eigen::Index i = 0; i < x.size(); ++i) f.push_back(x[i]);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = i; j < x.size(); ++j) f.push_back(x[i] * x[j]);
  }
  return Eigen::Map<Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
}

FeatureSpec betas_spec() {
  FeatureSpec s;
  s.channels = {Channel::betas};
  return s;
}

TEST(Ratings, Aggregate) {
  const RatingMatrix threes(2, {"a", "b"}, 4, std::vector<std::uint8_t>(16, 3));
  EXPECT_TRUE(aggregate_ratings(threes).isApprox(Eigen::MatrixXd::Constant(2, 2, 3.0)));
  const RatingMatrix two(1, {"a"}, 2, {1, 5});
  EXPECT_EQ(aggregate_ratings(two)(0, 0), 3.0);

  CounterRng rng(5);
  std::vector<std::uint8_t> s(7 * 3 * 5);
  for (auto& v : s) v = static_cast<std::uint8_t>(1 + rng.next_below(5));
  const RatingMatrix r(7, {"a", "b", "c"}, 5, s);
  const Eigen::MatrixXd agg = aggregate_ratings(r);
  for (std::size_t n = 0; n < 7; ++n) {
    for (std::size_t a = 0; a < 3; ++a) {
      double sum = 0;
      for (std::size_t k = 0; k < 5; ++k) sum += s[(n * 3 + a) * 5 + k];
      EXPECT_DOUBLE_EQ(agg(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a)), sum / 5);
    }
  }
  EXPECT_THROW(RatingMatrix(1, {"a"}, 2, {1, 6}), Error);
  EXPECT_THROW(RatingMatrix(1, {"a"}, 2, {1}), Error);
}

TEST(PolyFeatures, Definitions) {
  Eigen::VectorXd ab(2);
  ab << 2.0, 3.0;
  Eigen::VectorXd want(6);
  want << 1, 2, 3, 4, 6, 9;
  EXPECT_EQ(poly_features(ab, 2), want);
  Eigen::VectorXd x(1);
  x << 7.0;
  EXPECT_EQ(poly_features(x, 1), (Eigen::VectorXd(2) << 1, 7).finished());
  EXPECT_EQ(num_poly_features(15, 2), 136u);
  EXPECT_EQ(poly_features(Eigen::VectorXd::Ones(15), 2).size(), 136);
  CounterRng rng(6);
  const Eigen::VectorXd r = normal_matrix(rng, 9, 1);
  EXPECT_EQ(poly_features(r, 2), brute_features(r));
}

TEST(PolyFeatures, JacobianMatchesDifferences) {
  CounterRng rng(7);
  const Eigen::VectorXd x = normal_matrix(rng, 5, 1);
  const Eigen::MatrixXd j = poly_features_jacobian(x, 2);
  for (Eigen::Index i = 0; i < 5; ++i) {
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(5, i) * 1e-6;
    const Eigen::VectorXd fd = (poly_features(x + e, 2) - poly_features(x - e, 2)) / 2e-6;
    EXPECT_LT((fd - j.col(i)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(FitMapper, RecoversExactPolynomial) {
  CounterRng rng(8);
  const ChannelLayout layout{0, 4};
  const Eigen::MatrixXd x = normal_matrix(rng, 200, 4);
  const Eigen::MatrixXd w = normal_matrix(rng, 15, 3);
  Eigen::MatrixXd y(200, 3);
  for (int i = 0; i < 200; ++i) y.row(i) = (brute_features(x.row(i).transpose()).transpose() * w);
  const PolyMapper m = fit_mapper(x, y, betas_spec(), layout, OutputKind::betas, 0.0);
  EXPECT_LT((m.weights() - w).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(training_residual(m, x, y), 1e-10);
  for (int i = 0; i < 200; ++i) EXPECT_LT((m.apply(x.row(i).transpose()) - y.row(i).transpose()).norm(), 1e-8);
}

TEST(FitMapper, RecoversPolynomialInTransformedUnits) {
  CounterRng rng(9);
  const FeatureSpec spec = FeatureSpec::from_variant("HW2S");
  const ChannelLayout layout{0, 2};
  Eigen::MatrixXd x(100, 2);
  for (int i = 0; i < 100; ++i) x.row(i) << 1.5 + 0.4 * rng.next_uniform(), 45 + 60 * rng.next_uniform();
  const Eigen::MatrixXd w = normal_matrix(rng, 6, 2, 1e-3);
  Eigen::MatrixXd y(100, 2);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d t(100 * x(i, 0), std::cbrt(x(i, 1)));
    y.row(i) = brute_features(t).transpose() * w;
  }
  const PolyMapper m = fit_mapper(x, y, spec, layout, OutputKind::betas, 0.0);
  EXPECT_LT(training_residual(m, x, y), 1e-8);
}

TEST(FitMapper, ConstantTargets) {
  CounterRng rng(10);
  const Eigen::MatrixXd x = normal_matrix(rng, 50, 3);
  const Eigen::MatrixXd y = Eigen::MatrixXd::Constant(50, 2, 4.25);
  const PolyMapper m = fit_mapper(x, y, betas_spec(), {0, 3}, OutputKind::betas, 0.0);
  EXPECT_NEAR(m.weights()(0, 0), 4.25, 1e-10);
  EXPECT_LT(m.weights().bottomRows(m.weights().rows() - 1).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FitMapper, UnderdeterminedIsRankDeficient) {
  CounterRng rng(11);
  const Eigen::MatrixXd x = normal_matrix(rng, 8, 4);
  try {
    (void)fit_mapper(x, normal_matrix(rng, 8, 1), betas_spec(), {0, 4}, OutputKind::betas, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::rank_deficient);
  }
  EXPECT_NO_THROW((void)fit_mapper(x, normal_matrix(rng, 8, 1), betas_spec(), {0, 4}, OutputKind::betas, 1e-3));
}

TEST(FitMapper, PermutationInvariant) {
  CounterRng rng(12);
  Eigen::MatrixXd x = normal_matrix(rng, 60, 3);
  Eigen::MatrixXd y = normal_matrix(rng, 60, 2);
  const PolyMapper a = fit_mapper(x, y, betas_spec(), {0, 3}, OutputKind::betas, 1e-6);
  x.row(3).swap(x.row(40));
  y.row(3).swap(y.row(40));
  const PolyMapper b = fit_mapper(x, y, betas_spec(), {0, 3}, OutputKind::betas, 1e-6);
  const Eigen::VectorXd q = normal_matrix(rng, 3, 1);
  EXPECT_LT((a.apply(q) - b.apply(q)).norm(), 1e-10);
}

TEST(FitMapper, RidgeShrinksWeights) {
  CounterRng rng(13);
  const Eigen::MatrixXd x = normal_matrix(rng, 40, 3);
  const Eigen::MatrixXd y = normal_matrix(rng, 40, 1);
  const double n0 = fit_mapper(x, y, betas_spec(), {0, 3}, OutputKind::betas, 0.0).weights().norm();
  const double n1 = fit_mapper(x, y, betas_spec(), {0, 3}, OutputKind::betas, 10.0).weights().norm();
  EXPECT_LT(n1, n0);
}

TEST(FitMapper, AttributesNeverWorsenResidual) {
  CounterRng rng(14);
  for (int pop = 0; pop < 10; ++pop) {
    const int n = 120;
    Eigen::MatrixXd attrs(n, 3);
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < 3; ++a) attrs(i, a) = 1 + 4 * rng.next_uniform();
    }
    Eigen::MatrixXd h(n, 1);
    for (int i = 0; i < n; ++i) h(i, 0) = 1.5 + 0.4 * rng.next_uniform();
    const Eigen::MatrixXd y = normal_matrix(rng, n, 2);
    Eigen::MatrixXd ah(n, 4);
    ah << attrs, h;
    const double plain =
        training_residual(fit_mapper(h, y, FeatureSpec::from_variant("H2S"), {3, 2}, OutputKind::betas, 0.0), h, y);
    const double with_a =
        training_residual(fit_mapper(ah, y, FeatureSpec::from_variant("AH2S"), {3, 2}, OutputKind::betas, 0.0), ah, y);
    EXPECT_LE(with_a, plain * (1 + 1e-12));
  }
}

TEST(PolyMapper, ZeroWeightsGiveZero) {
  const PolyMapper m(betas_spec(), {0, 3}, OutputKind::betas, Eigen::MatrixXd::Zero(10, 2));
  EXPECT_TRUE(m.apply(Eigen::VectorXd::Constant(3, 0.7)).isZero(0.0));
}

TEST(PolyMapper, JacobianMatchesDifferences) {
  CounterRng rng(15);
  const PolyMapper m(FeatureSpec::from_variant("HWC2S"), {0, 3}, OutputKind::betas, normal_matrix(rng, 21, 3));
  Eigen::VectorXd x(5);
  x << 1.7, 70, 0.95, 0.8, 0.98;
  const Eigen::MatrixXd j = m.apply_jacobian(x);
  for (Eigen::Index i = 0; i < 5; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[i]));
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(5, i) * h;
    const Eigen::VectorXd fd = (m.apply(x + e) - m.apply(x - e)) / (2 * h);
    EXPECT_LT((fd - j.col(i)).norm() / std::max(1.0, fd.norm()), 1e-6);
  }
}

TEST(PolyMapper, InputLengthChecked) {
  const PolyMapper m(betas_spec(), {0, 3}, OutputKind::betas, Eigen::MatrixXd::Zero(10, 2));
  EXPECT_THROW((void)m.apply(Eigen::VectorXd::Zero(4)), Error);
}

TEST(Variants, NamesRoundTrip) {
  for (const char* v : {"A2S", "S2A", "H2S", "HW2S", "C2S", "HC2S", "HWC2S", "AH2S", "AHW2S", "AC2S", "AHC2S", "AHWC2S"}) {
    EXPECT_EQ(FeatureSpec::from_variant(v).variant_name(), v);
  }
  EXPECT_EQ(FeatureSpec::from_variant("WH2S").variant_name(), "HW2S");
  EXPECT_EQ(variant_output("S2A"), OutputKind::attribute_scores);
  EXPECT_EQ(variant_output("HC2S"), OutputKind::betas);
  EXPECT_THROW(FeatureSpec::from_variant("X2S"), Error);
  EXPECT_THROW(FeatureSpec::from_variant("2S"), Error);
  EXPECT_EQ(input_dim(FeatureSpec::from_variant("AHWC2S"), {15, 10}), 20u);
}

TEST(S2a, ClampsAndFlags) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 3);
  w(0, 0) = 5.7;
  w(0, 1) = 0.2;
  w(0, 2) = 3.0;
  const PolyMapper m(FeatureSpec::from_variant("S2A"), {3, 2}, OutputKind::attribute_scores, w, {"a", "b", "c"});
  const AttributePrediction p = s2a(m, ShapeVector::Zero(2));
  EXPECT_EQ(p.scores[0], 5.0);
  EXPECT_EQ(p.scores[1], 1.0);
  EXPECT_EQ(p.scores[2], 3.0);
  EXPECT_EQ(p.clamped, (std::vector<bool>{true, true, false}));
  const PolyMapper not_s2a(betas_spec(), {0, 2}, OutputKind::betas, w);
  EXPECT_THROW((void)s2a(not_s2a, ShapeVector::Zero(2)), Error);
}

TEST(MapperFile, RoundTripIsExact) {
  CounterRng rng(16);
  const auto dir = testing::scratch_dir("mapper");
  const PolyMapper m(FeatureSpec::from_variant("AHW2S"), {2, 3}, OutputKind::betas, normal_matrix(rng, 15, 3), {"tall", "big"},
                     Gender::female);
  save_mapper(m, dir / "m.json");
  const PolyMapper r = load_mapper(dir / "m.json");
  EXPECT_EQ(r.weights(), m.weights());
  EXPECT_EQ(r.spec().variant_name(), "AHW2S");
  EXPECT_EQ(r.attribute_names(), m.attribute_names());
  EXPECT_EQ(r.gender(), Gender::female);
  EXPECT_EQ(r.layout().num_betas, 3);
}

}  // namespace
}  // namespace shapekit
