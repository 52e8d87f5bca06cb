// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. One PASS/FAIL line per criterion with its runtime;
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "shapekit/anthropometry.hpp"
#include "shapekit/curation.hpp"
#include "shapekit/fixture.hpp"
#include "shapekit/metrics.hpp"
#include "shapekit/point_regressor.hpp"
#include "shapekit/poly_mapper.hpp"
#include "shapekit/primitives.hpp"
#include "shapekit/random.hpp"
#include "shapekit/shape_fitter.hpp"
#include "shapekit/training_data.hpp"
#include "synthetic.hpp"
#include "test_paths.hpp"

namespace shapekit {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
  double limit_s = 0.0;  // 0: no runtime limit
};

ShapeVector random_beta(CounterRng& rng, int b) {
  ShapeVector v(b);
  for (int k = 0; k < b; ++k) v[k] = rng.next_normal();
  return v;
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel_inf(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  return (got - want).lpNorm<Eigen::Infinity>() / std::max(1e-12, want.lpNorm<Eigen::Infinity>());
}

// ---------------------------------------------------------------------------

Outcome volume_oracle() {
  Outcome o{true, "", 10.0};
  const double cube = weight(make_unit_cube());
  o.pass &= cube == 985.0;
  // The polyhedral deficit drops below 0.5% from subdivision 4 on.
  double worst_sphere = 0.0;
  for (double r : {0.25, 0.5, 1.0}) {
    for (int sub : {4, 5}) {
      const double analytic = 985.0 * 4.0 / 3.0 * std::numbers::pi * r * r * r;
      worst_sphere = std::max(worst_sphere, std::abs(weight(make_icosphere(r, sub)) - analytic) / analytic);
    }
  }
  o.pass &= worst_sphere < 0.005;
  const TriangleMesh fx = make_fixture_model().template_mesh();
  const double voxel = testing::voxel_volume(fx, 256);
  const double vox_rel = std::abs(weight(fx) / 985.0 - voxel) / voxel;
  o.pass &= vox_rel < 0.01;
  o.detail = "cube " + fmt("%.6f kg", cube) + ", icosphere worst " + fmt("%.3f%%", 100 * worst_sphere) +
             ", fixture vs voxel256 " + fmt("%.4f%%", 100 * vox_rel);
  return o;
}

Outcome circumference_oracle() {
  Outcome o{true, "", 5.0};
  const TriangleMesh prism = make_prism(64, 0.15, 1.0, 3);
  const double analytic = 2 * 64 * 0.15 * std::sin(std::numbers::pi / 64);
  const double prism_err = std::abs(circumference(prism, 64) - analytic);
  o.pass &= prism_err < 1e-9;
  const BodyModel m = make_fixture_model();
  CounterRng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const ShapeVector beta = trial == 0 ? ShapeVector::Zero(4) : random_beta(rng, 4);
    const TriangleMesh mesh = m.shaped_mesh(beta);
    for (std::uint32_t lm : {m.landmarks().chest, m.landmarks().waist, m.landmarks().hip}) {
      const double h = mesh.vertices()(lm, 1);
      worst = std::max(worst, std::abs(circumference(mesh, lm) - testing::dense_slice_perimeter(mesh, h, 4096)));
    }
  }
  o.pass &= worst < 1e-6;
  o.detail = "64-gon error " + fmt("%.2e m", prism_err) + ", fixture vs dense oracle worst " + fmt("%.2e m", worst);
  return o;
}

PolyMapper fixture_s2a(const BodyModel& m) {
  FixturePopulationOptions po;
  po.subjects = 150;
  const FixturePopulation pop = make_fixture_population(m, po);
  const FeatureSpec spec = FeatureSpec::from_variant("S2A");
  const auto d = design_matrices(pop.training, spec, OutputKind::attribute_scores);
  return fit_mapper(d.inputs, d.targets, spec, pop.training.layout(), OutputKind::attribute_scores, kDefaultRidge,
                    pop.training.attribute_names);
}

Outcome gradient_suite() {
  Outcome o{true, "", 30.0};
  const BodyModel m = make_fixture_model();
  const PolyMapper s2a_mapper = fixture_s2a(m);
  CounterRng rng(102);
  const double eps = 1e-6;
  const int points = 25;
  int flagged = 0, checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < points; ++trial) {
    const ShapeVector beta = random_beta(rng, 4);
    const MeasurementGradients g = measure_gradients(m, beta);
    const Eigen::VectorXd* analytic[] = {&g.height, &g.weight, &g.chest_circ, &g.waist_circ, &g.hip_circ};

    FitTargets t;
    const ShapeVector other = random_beta(rng, 4);
    const MeasurementSet tm = measure(m, other);
    t.height = tm.height;
    t.chest = tm.chest_circ;
    t.waist = tm.waist_circ;
    t.hip = tm.hip_circ;
    t.attributes = s2a_mapper.apply(other);
    t.weights.reg = 1e-2;
    const LossEvaluation loss = shapy_loss(m, &s2a_mapper, beta, t);

    if (g.non_smooth() || loss.non_smooth) {
      ++flagged;
      continue;
    }
    for (int q = 0; q < 5; ++q) {
      const auto fd = testing::central_difference(
          [&](const Eigen::VectorXd& b) { return measure(m, b).as_array()[static_cast<std::size_t>(q)]; }, beta, eps);
      worst = std::max(worst, rel_inf(*analytic[q], fd));
    }
    const auto fd = testing::central_difference(
        [&](const Eigen::VectorXd& b) { return shapy_loss(m, &s2a_mapper, b, t, false).total; }, beta, eps);
    worst = std::max(worst, rel_inf(loss.gradient, fd));
    ++checked;
  }
  o.pass = checked >= 20 && worst < 1e-5 && flagged < 0.1 * points;
  o.detail = std::to_string(checked) + " smooth points checked, " + std::to_string(flagged) + "/" +
             std::to_string(points) + " flagged non-smooth, worst relative error " + fmt("%.2e", worst);
  return o;
}

Outcome polynomial_recovery() {
  Outcome o;
  CounterRng rng(103);
  // Exact recovery over every variant family with a known W.
  double worst_pred = 0.0;
  const std::vector<std::string> variants = {"A2S", "H2S", "HW2S", "C2S", "HC2S", "HWC2S", "AH2S", "AHWC2S"};
  const ChannelLayout layout{3, 4};
  auto random_inputs = [&](const FeatureSpec& spec, int n) {
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(input_dim(spec, layout)));
    for (int i = 0; i < n; ++i) {
      Eigen::Index c = 0;
      for (Channel ch : spec.channels) {
        switch (ch) {
          case Channel::attributes:
            for (int a = 0; a < 3; ++a) x(i, c++) = 1 + 4 * rng.next_uniform();
            break;
          case Channel::betas:
            for (int b = 0; b < 4; ++b) x(i, c++) = rng.next_normal();
            break;
          case Channel::height: x(i, c++) = 1.5 + 0.45 * rng.next_uniform(); break;
          case Channel::weight: x(i, c++) = 45 + 60 * rng.next_uniform(); break;
          default: x(i, c++) = 0.7 + 0.4 * rng.next_uniform(); break;
        }
      }
    }
    return x;
  };
  for (const auto& v : variants) {
    const FeatureSpec spec = FeatureSpec::from_variant(v);
    const Eigen::MatrixXd x = random_inputs(spec, 300);
    const auto nf = static_cast<Eigen::Index>(num_poly_features(input_dim(spec, layout), 2));
    Eigen::MatrixXd w(nf, 4);
    for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = 0.01 * rng.next_normal();
    const PolyMapper truth(spec, layout, OutputKind::betas, w);
    Eigen::MatrixXd y(x.rows(), 4);
    for (Eigen::Index i = 0; i < x.rows(); ++i) y.row(i) = truth.apply(x.row(i).transpose()).transpose();
    const PolyMapper fit = fit_mapper(x, y, spec, layout, OutputKind::betas, 0.0);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      worst_pred = std::max(worst_pred, (fit.apply(x.row(i).transpose()) - y.row(i).transpose()).lpNorm<Eigen::Infinity>());
    }
  }
  o.pass &= worst_pred < 1e-8;

  // Monotonicity: adding the attribute channel never raises the training
  // residual, on random (non-polynomial) populations.
  int violations = 0, comparisons = 0;
  for (int pop = 0; pop < 100; ++pop) {
    const int n = 80;
    const FeatureSpec all = FeatureSpec::from_variant("AHWC2S");
    const Eigen::MatrixXd x = random_inputs(all, n);
    Eigen::MatrixXd y(n, 4);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.next_normal();
    for (const std::string base : {"H2S", "HW2S", "C2S", "HC2S", "HWC2S"}) {
      const FeatureSpec plain = FeatureSpec::from_variant(base);
      const FeatureSpec with_a = FeatureSpec::from_variant("A" + base);
      // Columns of `x` are [A(3), H, W, C, W, H]; pick the ones each spec uses.
      auto columns = [&](const FeatureSpec& spec) {
        std::vector<Eigen::Index> cols;
        for (Channel ch : spec.channels) {
          switch (ch) {
            case Channel::attributes: cols.insert(cols.end(), {0, 1, 2}); break;
            case Channel::height: cols.push_back(3); break;
            case Channel::weight: cols.push_back(4); break;
            case Channel::chest: cols.push_back(5); break;
            case Channel::waist: cols.push_back(6); break;
            case Channel::hip: cols.push_back(7); break;
            default: break;
          }
        }
        Eigen::MatrixXd out(n, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t k = 0; k < cols.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = x.col(cols[k]);
        return out;
      };
      const Eigen::MatrixXd xp = columns(plain), xa = columns(with_a);
      const double rp = training_residual(fit_mapper(xp, y, plain, layout, OutputKind::betas, 0.0), xp, y);
      const double ra = training_residual(fit_mapper(xa, y, with_a, layout, OutputKind::betas, 0.0), xa, y);
      ++comparisons;
      if (ra > rp * (1 + 1e-10)) ++violations;
    }
  }
  o.pass &= violations == 0;
  o.detail = "exact-map prediction error " + fmt("%.2e", worst_pred) + ", attribute-augmented residual worse in " +
             std::to_string(violations) + "/" + std::to_string(comparisons) + " fits";
  return o;
}

Outcome inverse_fitting() {
  Outcome o{true, "", 60.0};
  const BodyModel m = make_fixture_model();
  CounterRng rng(104);
  const int cases = 50;
  int solved = 0;
  bool monotone = true;
  double worst_solved = 0.0;
  for (int i = 0; i < cases; ++i) {
    const ShapeVector star = random_beta(rng, 4);
    const MeasurementSet ms = measure(m, star);
    FitTargets t;
    t.height = ms.height;
    t.chest = ms.chest_circ;
    t.waist = ms.waist_circ;
    t.hip = ms.hip_circ;
    t.weights.reg = 0.0;
    FitConfig cfg;
    cfg.max_iters = 200;
    const FitResult r = fit_shape_from(m, nullptr, t, ShapeVector::Zero(4), cfg);
    for (std::size_t k = 1; k < r.loss_history.size(); ++k) monotone &= r.loss_history[k] <= r.loss_history[k - 1];
    const MeasurementSet got = measure(m, r.beta);
    const double res = std::max({std::abs(got.height - ms.height), std::abs(got.chest_circ - ms.chest_circ),
                                 std::abs(got.waist_circ - ms.waist_circ), std::abs(got.hip_circ - ms.hip_circ)});
    if (res < 1e-6 && r.iterations <= 200) {
      ++solved;
      worst_solved = std::max(worst_solved, res);
    }
  }
  o.pass = solved >= 0.95 * cases && monotone;
  o.detail = std::to_string(solved) + "/" + std::to_string(cases) + " fits below 1e-6 m (worst " +
             fmt("%.1e m", worst_solved) + "), loss history " + (monotone ? "non-increasing" : "INCREASED");
  return o;
}

Outcome p2p_suite() {
  Outcome o;
  const TriangleMesh fx = make_fixture_model().template_mesh();
  const PointRegressor reg = build_point_regressor(fx, 20000, 0);
  const double same = p2p20k(reg, fx.vertices(), reg, fx.vertices());
  o.pass &= same == 0.0;

  CounterRng rng(105);
  double worst_shift = 0.0;
  for (int i = 0; i < 10; ++i) {
    Vertices v = fx.vertices();
    v.rowwise() += Eigen::RowVector3d(rng.next_normal(), rng.next_normal(), rng.next_normal()) * 10.0;
    worst_shift = std::max(worst_shift, p2p20k(reg, fx.vertices(), reg, v));
  }
  o.pass &= worst_shift < 1e-9;

  const TriangleMesh sphere = make_icosphere(0.5, 4);
  const PointRegressor sreg = build_point_regressor(sphere, 20000, 0);
  const double inflated = p2p20k(sreg, sphere.vertices(), sreg, sphere.vertices() * (1.0 + 0.001 / 0.5));
  o.pass &= std::abs(inflated - 1.0) < 0.01;

  const bool reproducible = build_point_regressor(fx, 20000, 7) == build_point_regressor(fx, 20000, 7);
  o.pass &= reproducible;

  // Chi-square over 200 contiguous triangle groups of about equal area.
  const auto areas = triangle_areas(fx);
  double total = 0;
  for (double a : areas) total += a;
  const int bins = 200;
  std::vector<double> expected(bins, 0.0), observed(bins, 0.0);
  std::map<std::array<std::uint32_t, 3>, int> bin_of;
  double run = 0;
  for (std::size_t t = 0; t < areas.size(); ++t) {
    const int b = std::min(bins - 1, static_cast<int>((run + 0.5 * areas[t]) / total * bins));
    bin_of[fx.triangles()[t]] = b;
    expected[static_cast<std::size_t>(b)] += 20000 * areas[t] / total;
    run += areas[t];
  }
  for (const auto& row : reg.rows()) observed[static_cast<std::size_t>(bin_of.at(row.vertices))] += 1;
  const double p = testing::chi_square_p_value(testing::chi_square_statistic(observed, expected), bins - 1);
  o.pass &= p > 0.01;
  o.detail = "identical " + fmt("%.1g mm", same) + ", translated worst " + fmt("%.1e mm", worst_shift) +
             ", 1 mm field " + fmt("%.4f mm", inflated) + ", rebuild " + (reproducible ? "bit-identical" : "DIFFERS") +
             ", area chi-square p = " + fmt("%.3f", p);
  return o;
}

Outcome metric_constants() {
  Outcome o;
  CounterRng rng(106);
  const int n = 100000;
  Eigen::MatrixXd pred(n, 1), gt(n, 1);
  for (int i = 0; i < n; ++i) {
    pred(i, 0) = 1.0 + 4.0 * rng.next_uniform();
    gt(i, 0) = 1.0 + static_cast<double>(rng.next_below(5));
  }
  const double acc = s2a_accuracy(pred, gt).accuracy;
  o.pass = std::abs(acc - 0.20) <= 0.03;
  o.detail = "random-guess accuracy " + fmt("%.2f%%", 100 * acc) + " over 1e5 samples";
  return o;
}

Outcome identity_matching() {
  Outcome o;
  const auto bench = testing::make_duplicate_benchmark(50, 50, 3, 0.5, 107);
  // Observed cosine between copies of one identity.
  double cos_sum = 0;
  int cos_n = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const Eigen::MatrixXd s = pairwise_similarity(bench.site_a.subjects[i], bench.site_b.subjects[i]);
    cos_sum += s.sum();
    cos_n += static_cast<int>(s.size());
  }
  auto matched_at = [&](double tau) {
    MatchOptions opts;
    opts.tau = tau;
    std::set<std::pair<std::string, std::string>> out;
    for (const auto& m : match_identities(bench.site_a, bench.site_b, opts).matched) out.insert({m.a, m.b});
    return out;
  };
  const auto at_default = matched_at(kDefaultMatchThreshold);
  std::size_t tp = 0;
  for (const auto& [a, b] : at_default) tp += a == b ? 1 : 0;
  const double precision = at_default.empty() ? 0.0 : static_cast<double>(tp) / static_cast<double>(at_default.size());
  const double recall = tp / 50.0;
  o.pass = precision == 1.0 && recall == 1.0;

  bool monotone = true;
  std::set<std::pair<std::string, std::string>> prev;
  bool first = true;
  for (double tau = 0.05; tau < 0.99; tau += 0.05) {
    const auto cur = matched_at(tau);
    if (!first) monotone &= std::includes(prev.begin(), prev.end(), cur.begin(), cur.end());
    prev = cur;
    first = false;
  }
  o.pass &= monotone;
  o.detail = "duplicate cosine " + fmt("%.3f", cos_sum / cos_n) + ", precision " + fmt("%.2f", precision) +
             ", recall " + fmt("%.2f", recall) + ", tau sweep " + (monotone ? "nested" : "NOT nested");
  return o;
}

Outcome curation() {
  Outcome o;
  int over_cap = 0;
  bool deterministic = true;
  std::size_t selected = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto pop = testing::random_population(300, seed);
    BalanceOptions opts;
    opts.seed = seed;
    const BalanceResult r = balance_sample(pop, opts);
    selected += r.selected.size();
    std::map<std::string, const SubjectRecord*> by_id;
    for (const auto& p : pop) by_id[p.id] = &p;
    std::map<std::pair<long, long>, int> per_bin;
    for (const auto& id : r.selected) {
      const auto* p = by_id.at(id);
      const auto key = std::make_pair(static_cast<long>(std::floor(*p->height / opts.bin_h)),
                                      static_cast<long>(std::floor(*p->weight / opts.bin_w)));
      if (++per_bin[key] > opts.cap) ++over_cap;
    }
    if (seed % 10 == 0) deterministic &= balance_sample(pop, opts).selected == r.selected;
  }
  o.pass = over_cap == 0 && deterministic;
  o.detail = "1000 populations, " + std::to_string(selected) + " selections, " + std::to_string(over_cap) +
             " over-cap bins, reruns " + (deterministic ? "identical" : "DIFFER");
  return o;
}

Outcome golden_run() {
  Outcome o;
  const fs::path golden = testing::golden_dir();
  const fs::path work = testing::scratch_dir("acceptance-golden");
  std::ifstream spec(golden / "pipeline.txt");
  std::string line;
  int compared = 0, differing = 0;
  while (std::getline(spec, line)) {
    if (line.rfind("run ", 0) == 0) {
      std::string cmd = line.substr(4);
      for (std::size_t pos; (pos = cmd.find("@WORK@")) != std::string::npos;) cmd.replace(pos, 6, work.string());
      std::vector<std::string> args = {"shapekit", "--deterministic"};
      std::istringstream words(cmd);
      for (std::string w; words >> w;) args.push_back(w);
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      if (cli::run(static_cast<int>(argv.size()), argv.data(), out, err) != 0) {
        o.pass = false;
        o.detail = "step failed: " + cmd + ": " + err.str();
        return o;
      }
    } else if (line.rfind("compare ", 0) == 0) {
      const std::string name = line.substr(8);
      auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
      };
      ++compared;
      if (!fs::exists(golden / name) || slurp(work / name) != slurp(golden / name)) {
        ++differing;
        o.detail += " differs:" + name;
      }
    }
  }
  o.pass = compared > 0 && differing == 0;
  o.detail = std::to_string(compared - differing) + "/" + std::to_string(compared) + " golden files byte-identical" +
             o.detail;
  return o;
}

}  // namespace
}  // namespace shapekit

int main() {
  using namespace shapekit;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"volume-weight-oracle", volume_oracle},
      {"circumference-oracle", circumference_oracle},
      {"gradient-suite", gradient_suite},
      {"polynomial-recovery", polynomial_recovery},
      {"inverse-fitting", inverse_fitting},
      {"p2p20k-suite", p2p_suite},
      {"metric-constants", metric_constants},
      {"identity-matching", identity_matching},
      {"curation", curation},
      {"golden-run", golden_run},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = o.limit_s == 0.0 || secs < o.limit_s;
    const bool pass = o.pass && in_time;
    std::string timing = fmt("%.2f s", secs);
    if (o.limit_s > 0.0) timing += fmt(" (limit %.0f s)", o.limit_s);
    std::printf("%s  %-22s %-22s %s\n", pass ? "PASS" : "FAIL", name, timing.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
