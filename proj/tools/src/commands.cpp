// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "parallel.hpp"
#include "shapekit/csv.hpp"
#include "shapekit/embeddings.hpp"
#include "shapekit/error.hpp"
#include "shapekit/mesh_io.hpp"
#include "shapekit/metrics.hpp"
#include "shapekit/model_archive.hpp"
#include "shapekit/training_data.hpp"

namespace shapekit::cli {
namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void stamp(const Common& c, ordered_json& doc) {
  if (!c.deterministic) doc["created"] = timestamp();
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io_error, "cannot write file", path);
  f << text;
}

std::string dump(const ordered_json& doc) { return doc.dump(2) + "\n"; }

ordered_json measurement_json(const MeasurementSet& m) {
  return {{"height_m", m.height}, {"weight_kg", m.weight}, {"chest_m", m.chest_circ},
          {"waist_m", m.waist_circ}, {"hip_m", m.hip_circ}};
}

std::vector<std::string> read_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open file", path);
  std::vector<std::string> items;
  std::string line;
  const fs::path base = fs::path(path).parent_path();
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const fs::path p(line);
    items.push_back(p.is_absolute() ? p.string() : (base / p).string());
  }
  return items;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

BodyModel resolve_model(const std::string& spec) {
  if (spec.empty()) throw Error(ErrorCode::invalid_argument, "no model given", "--model");
  if (spec == "fixture") return make_fixture_model();
  return load_model(spec);
}

// fixture ----------------------------------------------------------------

void cmd_fixture(const Common& c, const FixtureArgs& a, std::ostream& out) {
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const BodyModel model = make_fixture_model({a.angular, a.rings});
  const fs::path model_path = a.zip ? dir / "model.zip" : dir / "model";
  if (a.zip) {
    save_model_zip(model, model_path);
  } else {
    save_model(model, model_path);
  }

  FixturePopulationOptions po;
  po.subjects = a.subjects;
  po.raters = a.raters;
  po.seed = c.seed;
  const FixturePopulation pop = make_fixture_population(model, po);
  write_training_csv(dir / "population.csv", pop.training);

  BetaTable betas;
  std::vector<std::string> ids;
  std::vector<MeasurementSet> meas;
  for (const auto& s : pop.training.samples) {
    betas.ids.push_back(s.id);
    betas.betas.push_back(s.betas);
    ids.push_back(s.id);
    meas.push_back({*s.height, *s.weight, *s.chest, *s.waist, *s.hip});
  }
  write_betas_csv(dir / "betas.csv", betas);
  write_measurements_csv(dir / "measurements.csv", ids, meas);
  write_betas_csv(dir / "zeros.csv", {{"zero"}, {ShapeVector::Zero(model.num_betas())}});

  ordered_json doc = {{"model", model_path.string()},
                      {"num_vertices", model.num_vertices()},
                      {"num_betas", model.num_betas()},
                      {"subjects", a.subjects},
                      {"raters", a.raters},
                      {"seed", c.seed},
                      {"reference", measurement_json(measure(model, ShapeVector::Zero(model.num_betas())))}};
  stamp(c, doc);
  out << dump(doc);
}

// measure ----------------------------------------------------------------

void cmd_measure(const Common& c, const MeasureArgs& a, std::ostream& out) {
  MeasureOptions opts;
  opts.density = a.density;
  opts.torso_only = a.torso_only;

  std::vector<std::string> ids;
  std::vector<MeasurementSet> rows;
  std::vector<MeasurementGradients> grads;

  if (!a.meshes.empty()) {
    if (a.gradients) throw Error(ErrorCode::invalid_argument, "gradients need --model and --betas", "--gradients");
    LandmarkSet lm;
    if (!a.landmarks.empty()) {
      if (a.landmarks.size() != 5) {
        throw Error(ErrorCode::invalid_argument, "expected 5 landmark indices: head_top,left_heel,chest,waist,hip",
                    "--landmarks");
      }
      lm = {a.landmarks[0], a.landmarks[1], a.landmarks[2], a.landmarks[3], a.landmarks[4]};
    } else if (!a.model.empty()) {
      lm = resolve_model(a.model).landmarks();
    } else {
      throw Error(ErrorCode::missing_landmark, "meshes need --landmarks or --model", "--landmarks");
    }
    rows.resize(a.meshes.size());
    parallel_for(a.meshes.size(), c.jobs, [&](std::size_t i) {
      const TriangleMesh mesh = read_mesh(a.meshes[i]);
      for (std::uint32_t v : {lm.head_top, lm.left_heel, lm.chest, lm.waist, lm.hip}) {
        if (v >= mesh.num_vertices()) {
          throw Error(ErrorCode::missing_landmark, "landmark index " + std::to_string(v) + " out of range",
                      a.meshes[i]);
        }
      }
      rows[i] = measure_mesh(mesh, lm, opts);
    });
    for (const auto& m : a.meshes) ids.push_back(fs::path(m).stem().string());
  } else {
    if (a.betas.empty()) throw Error(ErrorCode::invalid_argument, "give --betas or --mesh", "--betas");
    const BodyModel model = resolve_model(a.model);
    const BetaTable table = read_betas_csv(a.betas);
    ids = table.ids;
    rows.resize(table.betas.size());
    if (a.gradients) grads.resize(table.betas.size());
    parallel_for(table.betas.size(), c.jobs, [&](std::size_t i) {
      if (a.gradients) {
        grads[i] = measure_gradients(model, table.betas[i], opts);
        rows[i] = grads[i].values;
      } else {
        rows[i] = measure(model, table.betas[i], opts);
      }
    });
  }

  CsvTable t;
  t.header = {"subject_id", "height_m", "weight_kg", "chest_m", "waist_m", "hip_m"};
  const char* names[5] = {"height_m", "weight_kg", "chest_m", "waist_m", "hip_m"};
  const int b = grads.empty() ? 0 : static_cast<int>(grads.front().height.size());
  for (const char* n : names) {
    for (int k = 0; k < b; ++k) t.header.push_back(std::string("d_") + n + "_d_beta_" + std::to_string(k));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> row = {ids[i]};
    for (double v : rows[i].as_array()) row.push_back(format_double(v));
    if (!grads.empty()) {
      const Eigen::VectorXd* g[5] = {&grads[i].height, &grads[i].weight, &grads[i].chest_circ,
                                     &grads[i].waist_circ, &grads[i].hip_circ};
      for (const auto* gv : g) {
        for (int k = 0; k < b; ++k) row.push_back(format_double((*gv)[k]));
      }
    }
    t.rows.push_back(std::move(row));
  }
  emit(a.out, to_csv(t), out);
}

// fit-mapper -------------------------------------------------------------

void cmd_fit_mapper(const Common& c, const FitMapperArgs& a, std::ostream& out) {
  if (a.out.empty()) throw Error(ErrorCode::invalid_argument, "--out is required", "--out");
  TrainingSet set = read_training_csv(a.train);
  Gender gender = Gender::neutral;
  if (!a.gender.empty()) {
    gender = parse_gender(a.gender);
    set = set.filter(gender);
  } else if (!set.samples.empty()) {
    gender = set.samples.front().gender;
  }
  const FeatureSpec spec = FeatureSpec::from_variant(a.variant, a.degree);
  const OutputKind kind = variant_output(a.variant);
  const DesignMatrices d = design_matrices(set, spec, kind);
  const PolyMapper mapper = fit_mapper(d.inputs, d.targets, spec, set.layout(), kind, a.ridge, set.attribute_names, gender);
  save_mapper(mapper, a.out);
  ordered_json doc = {{"variant", spec.variant_name()},
                      {"subjects", d.inputs.rows()},
                      {"features", mapper.weights().rows()},
                      {"outputs", mapper.output_dim()},
                      {"ridge", a.ridge},
                      {"training_residual", training_residual(mapper, d.inputs, d.targets)}};
  stamp(c, doc);
  out << dump(doc);
}

// predict ----------------------------------------------------------------

void cmd_predict(const Common& c, const PredictArgs& a, std::ostream& out) {
  const PolyMapper mapper = load_mapper(a.mapper);
  const TrainingSet set = read_training_csv(a.input);
  std::vector<Eigen::VectorXd> preds(set.samples.size());
  parallel_for(set.samples.size(), c.jobs, [&](std::size_t i) {
    const Eigen::VectorXd x = assemble_input(mapper.spec(), set.samples[i]);
    if (mapper.output_kind() == OutputKind::attribute_scores) {
      // Scores are reported on the rating scale.
      preds[i] = mapper.apply(x).cwiseMax(1.0).cwiseMin(5.0);
    } else {
      preds[i] = mapper.apply(x);
    }
  });
  CsvTable t;
  t.header = {"subject_id"};
  if (mapper.output_kind() == OutputKind::attribute_scores) {
    for (const auto& n : mapper.attribute_names()) t.header.push_back("attr_" + n);
  } else {
    for (std::size_t k = 0; k < mapper.output_dim(); ++k) t.header.push_back("beta_" + std::to_string(k));
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    std::vector<std::string> row = {set.samples[i].id};
    for (Eigen::Index k = 0; k < preds[i].size(); ++k) row.push_back(format_double(preds[i][k]));
    t.rows.push_back(std::move(row));
  }
  emit(a.out, to_csv(t), out);
}

// fit-shape --------------------------------------------------------------

void cmd_fit_shape(const Common& c, const FitShapeArgs& a, std::ostream& out) {
  const BodyModel model = resolve_model(a.model);
  const TrainingSet set = read_training_csv(a.targets);
  std::optional<PolyMapper> s2a_mapper;
  if (!a.s2a.empty()) s2a_mapper = load_mapper(a.s2a);
  std::vector<PolyMapper> inits;
  for (const auto& p : a.init) inits.push_back(load_mapper(p));

  FitMappers mappers;
  mappers.s2a = s2a_mapper ? &*s2a_mapper : nullptr;
  for (const auto& m : inits) mappers.initializers.push_back(&m);

  FitConfig config;
  config.max_iters = a.max_iters;
  config.tolerance = a.tolerance;
  config.measure.torso_only = a.torso_only;
  if (a.step == "gauss-newton") {
    config.step_rule = StepRule::gauss_newton;
  } else if (a.step == "gradient-descent") {
    config.step_rule = StepRule::gradient_descent;
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown step rule '" + a.step + "'", "--step");
  }

  std::vector<FitResult> results(set.samples.size());
  parallel_for(set.samples.size(), c.jobs, [&](std::size_t i) {
    const auto& s = set.samples[i];
    FitTargets t;
    t.height = s.height;
    t.chest = s.chest;
    t.waist = s.waist;
    t.hip = s.hip;
    if (mappers.s2a && s.attributes.size() > 0) t.attributes = s.attributes;
    t.weights = {a.w_attr, a.w_height, a.w_circ, a.w_reg};
    results[i] = fit_shape(model, mappers, t, config);
  });

  BetaTable betas;
  CsvTable rep;
  rep.header = {"subject_id", "loss", "iterations", "converged", "non_smooth", "init"};
  for (std::size_t i = 0; i < results.size(); ++i) {
    betas.ids.push_back(set.samples[i].id);
    betas.betas.push_back(results[i].beta);
    rep.rows.push_back({set.samples[i].id, format_double(results[i].loss), std::to_string(results[i].iterations),
                        results[i].converged ? "1" : "0", std::to_string(results[i].non_smooth_encounters),
                        results[i].init});
  }
  if (a.out.empty() || a.out == "-") {
    CsvTable t;
    t.header = {"subject_id"};
    for (int k = 0; k < model.num_betas(); ++k) t.header.push_back("beta_" + std::to_string(k));
    for (std::size_t i = 0; i < results.size(); ++i) {
      std::vector<std::string> row = {betas.ids[i]};
      for (Eigen::Index k = 0; k < results[i].beta.size(); ++k) row.push_back(format_double(results[i].beta[k]));
      t.rows.push_back(std::move(row));
    }
    out << to_csv(t);
  } else {
    write_betas_csv(a.out, betas);
  }
  if (!a.report.empty()) write_csv(a.report, rep);
}

// eval -------------------------------------------------------------------

namespace {

struct Shapes {
  std::vector<std::string> ids;
  std::vector<Vertices> verts;
  std::optional<TriangleMesh> topology;  // template of the first shape
  std::optional<LandmarkSet> landmarks;
  std::string model_path;                // archive path, for the regressor cache
};

Shapes shapes_from_betas(const std::string& model_spec, const std::string& betas_path) {
  Shapes s;
  const BodyModel model = resolve_model(model_spec);
  const BetaTable t = read_betas_csv(betas_path);
  s.ids = t.ids;
  for (const auto& b : t.betas) s.verts.push_back(model.shaped_vertices(b));
  s.topology = model.template_mesh();
  s.landmarks = model.landmarks();
  if (model_spec != "fixture") s.model_path = model_spec;
  return s;
}

Shapes shapes_from_meshes(const std::string& list) {
  Shapes s;
  for (const auto& p : read_list(list)) {
    TriangleMesh m = read_mesh(p);
    if (!s.topology) {
      s.topology = m;
    } else if (m.topology_hash() != s.topology->topology_hash()) {
      throw Error(ErrorCode::dimension_mismatch, "all meshes in a list must share one topology", p);
    }
    s.ids.push_back(fs::path(p).stem().string());
    s.verts.push_back(m.vertices());
  }
  if (!s.topology) throw Error(ErrorCode::invalid_argument, "mesh list is empty", list);
  return s;
}

fs::path cache_path(const std::string& model_path, std::uint64_t topology, std::size_t points, std::uint64_t seed) {
  fs::path p = fs::path(model_path).lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  return p.parent_path() /
         (p.filename().string() + ".p2p-" + hex64(topology) + "-" + std::to_string(points) + "-" +
          std::to_string(seed) + ".bin");
}

PointRegressor regressor_for(const Shapes& s, std::size_t points, std::uint64_t seed, bool no_cache) {
  const TriangleMesh& tmpl = *s.topology;
  if (no_cache || s.model_path.empty()) return build_point_regressor(tmpl, points, seed);
  const fs::path cache = cache_path(s.model_path, tmpl.topology_hash(), points, seed);
  if (fs::exists(cache)) {
    PointRegressor r = load_point_regressor(cache);
    if (r.topology_id() == tmpl.topology_hash() && r.num_points() == points) return r;
  }
  PointRegressor r = build_point_regressor(tmpl, points, seed);
  try {
    save_point_regressor(r, cache);
  } catch (const Error&) {
    // Read-only archive location; the cache is an optimization only.
  }
  return r;
}

std::map<std::string, Eigen::VectorXd> attribute_rows(const std::string& path, std::vector<std::string>& names) {
  const TrainingSet set = read_training_csv(path);
  names = set.attribute_names;
  std::map<std::string, Eigen::VectorXd> rows;
  for (const auto& s : set.samples) rows[s.id] = s.attributes;
  return rows;
}

}  // namespace

void cmd_eval(const Common& c, const EvalArgs& a, std::ostream& out) {
  Shapes pred, gt;
  const bool meshes = !a.pred_meshes.empty() || !a.gt_meshes.empty();
  if (meshes) {
    if (a.pred_meshes.empty() || a.gt_meshes.empty()) {
      throw Error(ErrorCode::invalid_argument, "give both --pred-meshes and --gt-meshes", "--pred-meshes");
    }
    pred = shapes_from_meshes(a.pred_meshes);
    gt = shapes_from_meshes(a.gt_meshes);
    if (!a.model.empty()) {
      const BodyModel model = resolve_model(a.model);
      for (Shapes* s : {&pred, &gt}) {
        if (s->topology->topology_hash() == model.template_mesh().topology_hash()) s->landmarks = model.landmarks();
      }
    }
  } else {
    const std::string pm = a.pred_model.empty() ? a.model : a.pred_model;
    const std::string gm = a.gt_model.empty() ? a.model : a.gt_model;
    pred = shapes_from_betas(pm, a.pred_betas);
    gt = shapes_from_betas(gm, a.gt_betas);
  }

  // Pair by id, in ground-truth order.
  std::map<std::string, std::size_t> pred_index;
  for (std::size_t i = 0; i < pred.ids.size(); ++i) pred_index[pred.ids[i]] = i;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < gt.ids.size(); ++i) {
    const auto it = pred_index.find(gt.ids[i]);
    if (it == pred_index.end()) throw Error(ErrorCode::invalid_argument, "no prediction for subject", gt.ids[i]);
    pairs.emplace_back(it->second, i);
  }

  const PointRegressor gt_reg = regressor_for(gt, a.points, c.seed, a.no_cache);
  const bool same_topology = pred.topology->topology_hash() == gt.topology->topology_hash();
  std::optional<RegressorTransfer> transfer;
  if (!same_topology) transfer = transfer_point_regressor(*gt.topology, *pred.topology, gt_reg);
  const PointRegressor& pred_reg = same_topology ? gt_reg : transfer->regressor;
  const bool with_mae = pred.landmarks && gt.landmarks;

  ShapeErrorReport report;
  report.p2p20k_mm.resize(pairs.size());
  report.v2v_mm.resize(pairs.size());
  std::vector<MeasurementSet> pm(pairs.size()), gm(pairs.size());
  parallel_for(pairs.size(), c.jobs, [&](std::size_t k) {
    const auto& pv = pred.verts[pairs[k].first];
    const auto& gv = gt.verts[pairs[k].second];
    report.p2p20k_mm[k] = p2p20k(pred_reg, pv, gt_reg, gv);
    if (same_topology) report.v2v_mm[k] = v2v(pv, gv);
    if (with_mae) {
      pm[k] = measure_mesh(pred.topology->with_vertices(pv), *pred.landmarks);
      gm[k] = measure_mesh(gt.topology->with_vertices(gv), *gt.landmarks);
    }
  });
  for (const auto& p : pairs) report.ids.push_back(gt.ids[p.second]);
  if (with_mae) report.mae = measurement_mae(pm, gm);

  CsvTable t;
  t.header = {"subject_id", "p2p20k_mm", "v2v_mm"};
  if (with_mae) {
    for (const char* h : {"height_mm", "weight_kg", "chest_mm", "waist_mm", "hip_mm"}) t.header.push_back(h);
  }
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::vector<std::string> row = {report.ids[k], format_double(report.p2p20k_mm[k]),
                                    report.v2v_mm[k] ? format_double(*report.v2v_mm[k]) : ""};
    if (with_mae) {
      const MeasurementErrors e = measurement_mae({pm[k]}, {gm[k]});
      for (double v : {e.height_mm, e.weight_kg, e.chest_mm, e.waist_mm, e.hip_mm}) row.push_back(format_double(v));
    }
    t.rows.push_back(std::move(row));
  }
  if (!a.out.empty()) write_csv(a.out, t);

  ordered_json doc = {{"subjects", pairs.size()}, {"p2p20k_mm", report.mean_p2p20k()}};
  const auto v = report.mean_v2v();
  doc["v2v_mm"] = v ? json(*v) : json(nullptr);
  if (report.mae) {
    doc["mae"] = {{"height_mm", report.mae->height_mm}, {"weight_kg", report.mae->weight_kg},
                  {"chest_mm", report.mae->chest_mm},   {"waist_mm", report.mae->waist_mm},
                  {"hip_mm", report.mae->hip_mm}};
  }
  doc["regressor"] = {{"points", gt_reg.num_points()}, {"seed", c.seed}, {"topology", hex64(gt_reg.topology_id())}};
  if (transfer) {
    doc["transfer"] = {{"mean_distance_m", transfer->mean_distance}, {"max_distance_m", transfer->max_distance}};
  }
  if (!a.pred_attrs.empty() || !a.gt_attrs.empty()) {
    if (a.pred_attrs.empty() || a.gt_attrs.empty()) {
      throw Error(ErrorCode::invalid_argument, "give both --pred-attrs and --gt-attrs", "--pred-attrs");
    }
    std::vector<std::string> pn, gn;
    const auto pa = attribute_rows(a.pred_attrs, pn);
    const auto ga = attribute_rows(a.gt_attrs, gn);
    if (pn != gn) throw Error(ErrorCode::dimension_mismatch, "attribute columns differ", a.pred_attrs);
    Eigen::MatrixXd p(static_cast<Eigen::Index>(ga.size()), static_cast<Eigen::Index>(gn.size()));
    Eigen::MatrixXd g(p.rows(), p.cols());
    Eigen::Index r = 0;
    for (const auto& [id, row] : ga) {
      const auto it = pa.find(id);
      if (it == pa.end()) throw Error(ErrorCode::invalid_argument, "no attribute prediction for subject", id);
      p.row(r) = it->second.transpose();
      g.row(r) = row.transpose();
      ++r;
    }
    const S2aAccuracy acc = s2a_accuracy(p, g, gn);
    ordered_json per = ordered_json::array();
    for (const auto& x : acc.per_attribute) {
      per.push_back({{"name", x.name}, {"accuracy", x.accuracy}, {"mae", x.mae}, {"mae_sd", x.mae_sd}});
    }
    doc["s2a"] = {{"accuracy", acc.accuracy}, {"per_attribute", per}};
  }
  stamp(c, doc);
  emit(a.json, dump(doc), out);
}

// dedup ------------------------------------------------------------------

void cmd_dedup(const Common& c, const DedupArgs& a, std::ostream& out) {
  const EmbeddingSet sa = load_embeddings(a.a);
  const EmbeddingSet sb = load_embeddings(a.b);
  sa.validate();
  sb.validate();
  const MatchReport r = match_identities(sa, sb, {a.tau, a.strict});
  CsvTable t;
  t.header = {"a", "b", "s_tq", "status"};
  for (const auto& m : r.matched) t.rows.push_back({m.a, m.b, format_double(m.s_tq), "matched"});
  for (const auto& m : r.rejected) {
    t.rows.push_back({m.a, m.b, format_double(m.s_tq),
                      m.stage == RejectStage::dissimilar ? "dissimilar" : "below_threshold"});
  }
  if (!a.out.empty()) write_csv(a.out, t);
  ordered_json doc = {{"tau", r.tau},
                      {"strict", r.strict},
                      {"compared", r.compared},
                      {"skipped_gender", r.skipped_gender},
                      {"matched", r.matched.size()},
                      {"rejected_dissimilar", r.rejected_at(RejectStage::dissimilar)},
                      {"rejected_below_threshold", r.rejected_at(RejectStage::below_threshold)}};
  stamp(c, doc);
  out << dump(doc);
}

// curate -----------------------------------------------------------------

void cmd_curate(const Common& c, const CurateArgs& a, std::ostream& out) {
  const auto subjects = read_subjects_csv(a.subjects);
  const BalanceResult r = balance_sample(subjects, {a.bin_h, a.bin_w, a.cap, c.seed});
  std::vector<std::string> ids = r.selected;
  if (a.bmi_pick) {
    std::map<std::string, const SubjectRecord*> by_id;
    for (const auto& s : subjects) by_id[s.id] = &s;
    std::vector<SubjectRecord> pool;
    for (const auto& id : ids) pool.push_back(*by_id.at(id));
    ids = bmi_weighted_pick(pool, *a.bmi_pick, c.seed);
  }
  CsvTable t;
  t.header = {"subject_id"};
  for (const auto& id : ids) t.rows.push_back({id});
  if (!a.out.empty()) write_csv(a.out, t);
  ordered_json doc = {{"subjects", subjects.size()}, {"bins", r.num_bins},       {"balanced", r.selected.size()},
                      {"selected", ids.size()},      {"skipped", r.skipped},     {"seed", c.seed}};
  stamp(c, doc);
  out << dump(doc);
}

// report -----------------------------------------------------------------

void cmd_report(const Common&, const ReportArgs& a, std::ostream& out) {
  const CsvTable in = read_csv(a.input);
  if (a.format != "markdown" && a.format != "csv") {
    throw Error(ErrorCode::invalid_argument, "format must be markdown or csv", "--format");
  }
  // Column means over numeric cells; blank cells are skipped.
  std::vector<double> sum(in.header.size(), 0.0);
  std::vector<std::size_t> count(in.header.size(), 0);
  std::vector<bool> numeric(in.header.size(), true);
  for (const auto& row : in.rows) {
    for (std::size_t j = 0; j < row.size() && j < in.header.size(); ++j) {
      if (row[j].empty()) continue;
      try {
        sum[j] += parse_double(row[j], in.header[j]);
        ++count[j];
      } catch (const Error&) {
        numeric[j] = false;
      }
    }
  }
  auto fixed = [&](const std::string& cell) {
    if (cell.empty()) return std::string("-");
    try {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.*f", a.precision, parse_double(cell, ""));
      return std::string(buf);
    } catch (const Error&) {
      return cell;
    }
  };
  std::vector<std::vector<std::string>> body;
  for (const auto& row : in.rows) {
    std::vector<std::string> r;
    for (std::size_t j = 0; j < in.header.size(); ++j) r.push_back(j < row.size() ? fixed(row[j]) : "-");
    body.push_back(std::move(r));
  }
  std::vector<std::string> mean_row;
  for (std::size_t j = 0; j < in.header.size(); ++j) {
    if (j == 0) {
      mean_row.push_back("mean");
    } else if (numeric[j] && count[j] > 0) {
      mean_row.push_back(fixed(format_double(sum[j] / static_cast<double>(count[j]))));
    } else {
      mean_row.push_back("-");
    }
  }
  body.push_back(mean_row);

  std::ostringstream s;
  if (a.format == "csv") {
    CsvTable t{in.header, body};
    s << to_csv(t);
  } else {
    auto line = [&](const std::vector<std::string>& cells) {
      s << "|";
      for (const auto& cell : cells) s << " " << cell << " |";
      s << "\n";
    };
    line(in.header);
    s << "|";
    for (std::size_t j = 0; j < in.header.size(); ++j) s << (j == 0 ? " --- |" : " ---: |");
    s << "\n";
    for (const auto& r : body) line(r);
  }
  emit(a.out, s.str(), out);
}

}  // namespace shapekit::cli
