// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

// Microbenchmarks for the hot paths: measurement, gradients, fitting,
// surface-point evaluation and identity matching.

#include <benchmark/benchmark.h>

#include "shapekit/anthropometry.hpp"
#include "shapekit/curation.hpp"
#include "shapekit/fixture.hpp"
#include "shapekit/metrics.hpp"
#include "shapekit/point_regressor.hpp"
#include "shapekit/random.hpp"
#include "shapekit/shape_fitter.hpp"

namespace shapekit {
namespace {

ShapeVector demo_beta(int b, std::uint64_t seed) {
  CounterRng rng(seed);
  ShapeVector v(b);
  for (int k = 0; k < b; ++k) v[k] = rng.next_normal();
  return v;
}

BodyModel model_with_rings(int rings) {
  FixtureOptions opts;
  opts.rings = rings;
  return make_fixture_model(opts);
}

void BM_Measure(benchmark::State& state) {
  const BodyModel m = model_with_rings(static_cast<int>(state.range(0)));
  const ShapeVector beta = demo_beta(m.num_betas(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(measure(m, beta));
  state.counters["vertices"] = static_cast<double>(m.template_mesh().num_vertices());
}
BENCHMARK(BM_Measure)->Arg(16)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_MeasureGradients(benchmark::State& state) {
  const BodyModel m = model_with_rings(static_cast<int>(state.range(0)));
  const ShapeVector beta = demo_beta(m.num_betas(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(measure_gradients(m, beta));
}
BENCHMARK(BM_MeasureGradients)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_FitShape(benchmark::State& state) {
  const BodyModel m = make_fixture_model();
  const MeasurementSet ms = measure(m, demo_beta(m.num_betas(), 3));
  FitTargets t;
  t.height = ms.height;
  t.chest = ms.chest_circ;
  t.waist = ms.waist_circ;
  t.hip = ms.hip_circ;
  t.weights.reg = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fit_shape_from(m, nullptr, t, ShapeVector::Zero(m.num_betas()), FitConfig{}));
  }
}
BENCHMARK(BM_FitShape)->Unit(benchmark::kMillisecond);

void BM_BuildPointRegressor(benchmark::State& state) {
  const TriangleMesh mesh = make_fixture_model().template_mesh();
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_point_regressor(mesh, static_cast<std::size_t>(state.range(0)), 0));
  }
}
BENCHMARK(BM_BuildPointRegressor)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_P2P20K(benchmark::State& state) {
  const BodyModel m = make_fixture_model();
  const PointRegressor reg = build_point_regressor(m.template_mesh(), 20000, 0);
  const Vertices a = m.shaped_vertices(demo_beta(m.num_betas(), 4));
  const Vertices b = m.shaped_vertices(demo_beta(m.num_betas(), 5));
  for (auto _ : state) benchmark::DoNotOptimize(p2p20k(reg, a, reg, b));
}
BENCHMARK(BM_P2P20K)->Unit(benchmark::kMicrosecond);

EmbeddingSet random_embeddings(int subjects, int images, std::uint64_t seed) {
  CounterRng rng(seed);
  EmbeddingSet set;
  for (int s = 0; s < subjects; ++s) {
    SubjectEmbeddings e;
    e.id = "s" + std::to_string(s);
    e.vectors.resize(images, kEmbeddingDim);
    for (Eigen::Index i = 0; i < e.vectors.size(); ++i) e.vectors.data()[i] = rng.next_normal();
    e.vectors.rowwise().normalize();
    set.subjects.push_back(std::move(e));
  }
  return set;
}

void BM_MatchIdentities(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const EmbeddingSet a = random_embeddings(n, 3, 6);
  const EmbeddingSet b = random_embeddings(n, 3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(match_identities(a, b));
  state.SetComplexityN(n);
}
BENCHMARK(BM_MatchIdentities)->RangeMultiplier(2)->Range(32, 256)->Complexity()->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace shapekit

BENCHMARK_MAIN();
