// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <exception>
#include <functional>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "shapekit/error.hpp"

namespace shapekit::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Body-shape measurement, mapping, fitting and evaluation toolkit", "shapekit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "shapekit 0.3.0");
  app.set_config("--config", "", "Read option values from a TOML or INI file; flags given on the command line win");

  Common common;
  bool print_config = false;
  app.add_option("--seed", common.seed, "Seed for every random draw")->capture_default_str();
  app.add_flag("--deterministic", common.deterministic, "Omit timestamps so outputs are byte-stable");
  app.add_option("--jobs", common.jobs, "Worker threads for batch commands")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--print-config", print_config, "Print the effective configuration as TOML and exit");

  std::function<void()> action;

  FixtureArgs fx;
  auto* fixture = app.add_subcommand("fixture", "Write the capsule-person model and a synthetic population");
  fixture->add_option("--out", fx.out, "Output directory")->required();
  fixture->add_option("--subjects", fx.subjects, "Population size")->capture_default_str();
  fixture->add_option("--raters", fx.raters, "Ratings per attribute and subject")->capture_default_str();
  fixture->add_option("--angular", fx.angular, "Vertices per ring")->capture_default_str();
  fixture->add_option("--rings", fx.rings, "Ring count")->capture_default_str();
  fixture->add_flag("--zip", fx.zip, "Write model.zip instead of a model/ directory");
  fixture->callback([&] { action = [&] { cmd_fixture(common, fx, out); }; });

  MeasureArgs ms;
  auto* measure = app.add_subcommand("measure", "Height, weight and circumferences per shape or mesh");
  measure->add_option("--model", ms.model, "Model archive, or 'fixture'");
  measure->add_option("--betas", ms.betas, "Betas CSV");
  measure->add_option("--mesh", ms.meshes, "OBJ/PLY files (repeatable)");
  measure->add_option("--landmarks", ms.landmarks, "head_top,left_heel,chest,waist,hip vertex indices")
      ->delimiter(',');
  measure->add_option("--out", ms.out, "Output CSV (default stdout)");
  measure->add_option("--density", ms.density, "Body density, kg/m^3")->capture_default_str();
  measure->add_flag("--torso-only", ms.torso_only, "Hull only the intersection loop at the landmark");
  measure->add_flag("--gradients", ms.gradients, "Append d measurement / d beta columns");
  measure->callback([&] { action = [&] { cmd_measure(common, ms, out); }; });

  FitMapperArgs fm;
  auto* fit_mapper = app.add_subcommand("fit-mapper", "Fit a polynomial A2S/S2A-family mapper");
  fit_mapper->add_option("--train", fm.train, "Training CSV")->required();
  fit_mapper->add_option("--variant", fm.variant, "A2S, S2A, H2S, HW2S, C2S, HC2S, HWC2S, AH2S, ...")->required();
  fit_mapper->add_option("--gender", fm.gender, "Keep only rows of this gender");
  fit_mapper->add_option("--ridge", fm.ridge, "Ridge penalty; 0 for plain least squares")->capture_default_str();
  fit_mapper->add_option("--degree", fm.degree, "Polynomial degree")->capture_default_str();
  fit_mapper->add_option("--out", fm.out, "Mapper JSON path")->required();
  fit_mapper->callback([&] { action = [&] { cmd_fit_mapper(common, fm, out); }; });

  PredictArgs pr;
  auto* predict = app.add_subcommand("predict", "Apply a fitted mapper to a CSV");
  predict->add_option("--mapper", pr.mapper, "Mapper JSON")->required();
  predict->add_option("--input", pr.input, "Input CSV")->required();
  predict->add_option("--out", pr.out, "Output CSV (default stdout)");
  predict->callback([&] { action = [&] { cmd_predict(common, pr, out); }; });

  FitShapeArgs fs;
  auto* fit_shape = app.add_subcommand("fit-shape", "Fit betas to measurement and attribute targets");
  fit_shape->add_option("--model", fs.model, "Model archive, or 'fixture'")->required();
  fit_shape->add_option("--targets", fs.targets, "Targets CSV")->required();
  fit_shape->add_option("--s2a", fs.s2a, "S2A mapper for the attribute term");
  fit_shape->add_option("--init", fs.init, "A2S-family initializer (repeatable)");
  fit_shape->add_option("--out", fs.out, "Betas CSV (default stdout)");
  fit_shape->add_option("--report", fs.report, "Per-subject fit report CSV");
  fit_shape->add_option("--max-iters", fs.max_iters, "Iteration cap")->capture_default_str();
  fit_shape->add_option("--step", fs.step, "gauss-newton or gradient-descent")->capture_default_str();
  fit_shape->add_option("--tolerance", fs.tolerance, "Stop once the loss moves less than this")
      ->capture_default_str();
  fit_shape->add_option("--w-attr", fs.w_attr, "Attribute loss weight")->capture_default_str();
  fit_shape->add_option("--w-height", fs.w_height, "Height loss weight")->capture_default_str();
  fit_shape->add_option("--w-circ", fs.w_circ, "Circumference loss weight")->capture_default_str();
  fit_shape->add_option("--w-reg", fs.w_reg, "Beta regularizer weight")->capture_default_str();
  fit_shape->add_flag("--torso-only", fs.torso_only, "Torso-only circumferences");
  fit_shape->callback([&] { action = [&] { cmd_fit_shape(common, fs, out); }; });

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "P2P20K, V2V, measurement MAE and S2A accuracy");
  eval->add_option("--model", ev.model, "Model for both sides, or landmarks for mesh lists");
  eval->add_option("--pred-model", ev.pred_model, "Model of the predictions");
  eval->add_option("--gt-model", ev.gt_model, "Model of the ground truth");
  eval->add_option("--pred-betas", ev.pred_betas, "Predicted betas CSV");
  eval->add_option("--gt-betas", ev.gt_betas, "Ground-truth betas CSV");
  eval->add_option("--pred-meshes", ev.pred_meshes, "Text file listing predicted meshes");
  eval->add_option("--gt-meshes", ev.gt_meshes, "Text file listing ground-truth meshes");
  eval->add_option("--pred-attrs", ev.pred_attrs, "Predicted attribute CSV");
  eval->add_option("--gt-attrs", ev.gt_attrs, "Ground-truth attribute CSV");
  eval->add_option("--points", ev.points, "Surface points")->capture_default_str();
  eval->add_flag("--no-cache", ev.no_cache, "Do not read or write the regressor cache");
  eval->add_option("--out", ev.out, "Per-subject CSV");
  eval->add_option("--json", ev.json, "Summary JSON (default stdout)");
  eval->callback([&] { action = [&] { cmd_eval(common, ev, out); }; });

  DedupArgs dd;
  auto* dedup = app.add_subcommand("dedup", "Match identities across two embedding sets");
  dedup->add_option("--a", dd.a, "First embedding manifest")->required();
  dedup->add_option("--b", dd.b, "Second embedding manifest")->required();
  dedup->add_option("--tau", dd.tau, "Similarity threshold")->capture_default_str();
  dedup->add_flag("--strict", dd.strict, "Drop pairs whose column means never exceed tau");
  dedup->add_option("--out", dd.out, "Pair CSV");
  dedup->callback([&] { action = [&] { cmd_dedup(common, dd, out); }; });

  CurateArgs cu;
  auto* curate = app.add_subcommand("curate", "Height/weight histogram balancing");
  curate->add_option("--subjects", cu.subjects, "Subject CSV")->required();
  curate->add_option("--bin-h", cu.bin_h, "Height bin, m")->capture_default_str();
  curate->add_option("--bin-w", cu.bin_w, "Weight bin, kg")->capture_default_str();
  curate->add_option("--cap", cu.cap, "Subjects kept per bin")->capture_default_str();
  curate->add_option("--bmi-pick", cu.bmi_pick, "Then draw this many, weighted by BMI");
  curate->add_option("--out", cu.out, "Selected ids CSV");
  curate->callback([&] { action = [&] { cmd_curate(common, cu, out); }; });

  ReportArgs rp;
  auto* report = app.add_subcommand("report", "Render a per-subject CSV as a table with a mean row");
  report->add_option("--input", rp.input, "CSV from eval")->required();
  report->add_option("--format", rp.format, "markdown or csv")->capture_default_str();
  report->add_option("--precision", rp.precision, "Decimals")->capture_default_str();
  report->add_option("--out", rp.out, "Output (default stdout)");
  report->callback([&] { action = [&] { cmd_report(common, rp, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n";
    const auto chosen = app.get_subcommands();
    err << (chosen.empty() ? app.help() : chosen.front()->help());
    return kExitUsage;
  }

  if (print_config) {
    out << app.config_to_str(true, false);
    return kExitOk;
  }
  try {
    action();
  } catch (const Error& e) {
    err << e.to_json() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"code", "io_error"}, {"message", e.what()}, {"context", ""}}.dump() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace shapekit::cli
