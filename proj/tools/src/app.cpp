#include "uq/app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ensuq/bayes.hpp"
#include "ensuq/credal.hpp"
#include "ensuq/error.hpp"
#include "ensuq/experiment.hpp"
#include "ensuq/forest.hpp"
#include "uq/config.hpp"
#include "uq/csv.hpp"
#include "uq/manifest.hpp"

namespace uq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ExperimentArgs {
  std::string config_path;
  std::string data;
  std::string label;
  double train_fraction = 0.0;
  long long runs = 0;
  double delta = 0.0;
  long long trees = 0;
  int max_depth = 0;
  std::uint64_t seed = 0;
  double grid_step = 0.0;
  double grid_max = 0.0;
  std::string out;
  bool emit_scores = false;
  bool oob = false;
};

struct UqArgs {
  std::string data;
  std::string label;
  std::string model;
  std::string save_model;
  std::string query;
  std::string out;
  double delta = 2.0;
  long long trees = 10;
  int max_depth = 10;
  std::uint64_t seed = 0;
  bool oob = false;
};

struct FingerprintArgs {
  std::string data;
  std::string label;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) throw ensuq::Error(ensuq::Errc::IoFailure, "failed to write " + path.string());
}

void report_skipped(const IngestReport& report, std::ostream& err) {
  if (report.skipped_lines.empty()) return;
  err << "note: skipped " << report.skipped_lines.size() << " row(s) with missing values at line(s)";
  for (auto line : report.skipped_lines) err << ' ' << line;
  err << '\n';
}

// Only flags the user actually passed take part in config layering.
json explicit_flags(CLI::App& cmd, const ExperimentArgs& a) {
  json flags = json::object();
  auto set = [&](const char* name, auto value) {
    if (cmd.get_option(std::string("--") + name)->count() > 0) flags[name] = value;
  };
  set("data", a.data);
  set("label", a.label);
  set("train-fraction", a.train_fraction);
  set("runs", a.runs);
  set("delta", a.delta);
  set("trees", a.trees);
  set("max-depth", a.max_depth);
  set("seed", a.seed);
  set("grid-step", a.grid_step);
  set("grid-max", a.grid_max);
  set("out", a.out);
  set("emit-scores", a.emit_scores);
  set("oob-likelihood", a.oob);
  return flags;
}

int cmd_experiment(CLI::App& cmd, const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
  const json file = a.config_path.empty() ? json() : load_config_file(a.config_path);
  const ResolvedExperiment resolved = resolve_experiment(file, explicit_flags(cmd, a));
  const auto& cfg = resolved.config;

  IngestReport report;
  const ensuq::Dataset data = ingest_csv(cfg.data_path, cfg.label_column, &report);
  report_skipped(report, err);

  const auto result = ensuq::run_experiment(data, cfg, thread_budget());

  const fs::path dir = resolved.out_dir;
  fs::create_directories(dir);
  RunManifest manifest;

  std::ostringstream curves;
  write_curves_csv(curves, result.curves);
  write_file(dir / "curves.csv", curves.str());
  manifest.outputs.push_back("curves.csv");

  if (resolved.emit_scores) {
    std::ostringstream scores;
    write_scores_csv(scores, result.last_run);
    write_file(dir / "scores.csv", scores.str());
    manifest.outputs.push_back("scores.csv");
  }

  manifest.config = resolved.settings;
  manifest.dataset_path = cfg.data_path;
  manifest.dataset_sha256 = sha256_file(cfg.data_path);
  manifest.rows = data.rows();
  manifest.dims = data.dims();
  manifest.classes = data.classes();
  manifest.version = std::string(toolkit_version());
  manifest.timestamp = utc_timestamp();
  manifest.outputs.push_back("manifest.json");
  write_file(dir / "manifest.json", to_json(manifest).dump(2) + "\n");

  out << "wrote";
  for (const auto& name : manifest.outputs) out << ' ' << (dir / name).string();
  out << '\n';
  return 0;
}

int cmd_uq(const UqArgs& a, std::ostream& out, std::ostream& err) {
  ensuq::ForestModel forest;
  std::vector<std::string> feature_names;
  if (!a.model.empty()) {
    std::ifstream in(a.model);
    if (!in) throw ensuq::Error(ensuq::Errc::FileNotFound, "cannot open model " + a.model);
    forest = ensuq::load_forest(in);
  } else {
    if (a.data.empty() || a.label.empty()) {
      throw ensuq::Error(ensuq::Errc::InvalidConfig, "either --model or --data with --label is required");
    }
    IngestReport report;
    const auto data = ingest_csv(a.data, a.label, &report);
    report_skipped(report, err);
    ensuq::ForestConfig fc;
    if (a.trees < 1) throw ensuq::Error(ensuq::Errc::InvalidConfig, "trees must be >= 1");
    fc.trees = static_cast<std::size_t>(a.trees);
    fc.max_depth = a.max_depth;
    fc.seed = a.seed;
    fc.oob_likelihood = a.oob;
    forest = ensuq::train_forest(data, fc);
    feature_names = data.feature_names();
    if (forest.single_class) err << "warning: training labels cover a single class\n";
  }
  if (!a.save_model.empty()) {
    std::ofstream mo(a.save_model, std::ios::binary | std::ios::trunc);
    ensuq::save_forest(forest, mo);
  }

  const auto rows = read_query_rows(a.query, feature_names, forest.dims, a.label);
  const auto posterior = ensuq::posterior_from_likelihoods(forest.log_likelihoods);

  std::ostringstream table;
  table << "row,predicted_class";
  for (auto method : ensuq::kAllMethods) {
    for (auto measure : ensuq::kAllMeasures) {
      table << ',' << ensuq::to_string(method) << '_' << ensuq::to_string(measure);
    }
  }
  table << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto ens = ensuq::ensemble_output(forest, rows[i]);
    const ensuq::ProbVector bma = ensuq::bma_prediction(ens, posterior);
    const auto q = bma.values();
    const auto predicted = std::max_element(q.begin(), q.end()) - q.begin();
    const auto levi = ensuq::levi_measures(ens, a.delta);
    const ensuq::UncertaintyReport reports[] = {ensuq::bayes_decomposition(ens, posterior),
                                                ensuq::levi_gh_report(levi),
                                                ensuq::levi_ent_report(levi)};
    table << i << ',' << predicted;
    for (const auto& r : reports) {
      for (auto measure : ensuq::kAllMeasures) table << ',' << format_real(r.get(measure));
    }
    table << '\n';
  }

  if (a.out.empty()) {
    out << table.str();
  } else {
    write_file(a.out, table.str());
  }
  return 0;
}

int cmd_fingerprint(const FingerprintArgs& a, std::ostream& out, std::ostream& err) {
  json j{{"path", a.data}, {"sha256", sha256_file(a.data)}, {"bytes", fs::file_size(a.data)}};
  if (!a.label.empty()) {
    IngestReport report;
    const auto data = ingest_csv(a.data, a.label, &report);
    report_skipped(report, err);
    j["rows"] = data.rows();
    j["features"] = data.dims();
    j["classes"] = data.classes();
    j["skipped_rows"] = report.skipped_lines.size();
  }
  out << j.dump() << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"uq - ensemble uncertainty quantification (Bayesian and credal)", "uq"};
  app.require_subcommand(1);

  ExperimentArgs ea;
  auto* exp = app.add_subcommand("experiment", "Repeated train/test accuracy-rejection experiment");
  exp->add_option("--config", ea.config_path, "JSON file with keys mirroring the flags");
  exp->add_option("--data", ea.data, "CSV dataset with a header row");
  exp->add_option("--label", ea.label, "Name of the label column");
  exp->add_option("--train-fraction", ea.train_fraction, "Training share of each split (default 0.7)");
  exp->add_option("--runs", ea.runs, "Number of repetitions (default 100)");
  exp->add_option("--delta", ea.delta, "Prior-family radius delta >= 1 (default 2)");
  exp->add_option("--trees", ea.trees, "Ensemble size (default 10)");
  exp->add_option("--max-depth", ea.max_depth, "Tree depth cap (default 10)");
  exp->add_option("--seed", ea.seed, "Master seed (default 0)");
  exp->add_option("--grid-step", ea.grid_step, "Rejection grid step (default 0.05)");
  exp->add_option("--grid-max", ea.grid_max, "Largest rejection rate (default 0.9)");
  exp->add_option("--out", ea.out, "Output directory (default .)");
  exp->add_flag("--emit-scores", ea.emit_scores, "Also write per-instance scores of the final run");
  exp->add_flag("--oob-likelihood", ea.oob, "Member likelihoods on out-of-bag rows");

  UqArgs ua;
  auto* uqc = app.add_subcommand("uq", "Uncertainty reports for query rows");
  uqc->add_option("--data", ua.data, "Training CSV (ignored with --model)");
  uqc->add_option("--label", ua.label, "Label column name");
  uqc->add_option("--model", ua.model, "Forest file written by --save-model");
  uqc->add_option("--save-model", ua.save_model, "Write the forest used for scoring");
  uqc->add_option("--query", ua.query, "CSV of query rows")->required();
  uqc->add_option("--out", ua.out, "Output CSV (default stdout)");
  uqc->add_option("--delta", ua.delta, "Prior-family radius delta >= 1")->capture_default_str();
  uqc->add_option("--trees", ua.trees, "Ensemble size")->capture_default_str();
  uqc->add_option("--max-depth", ua.max_depth, "Tree depth cap")->capture_default_str();
  uqc->add_option("--seed", ua.seed, "Training seed")->capture_default_str();
  uqc->add_flag("--oob-likelihood", ua.oob, "Member likelihoods on out-of-bag rows");

  FingerprintArgs fa;
  auto* ds = app.add_subcommand("datasets", "Dataset utilities");
  ds->require_subcommand(1);
  auto* fp = ds->add_subcommand("fingerprint", "Content hash and shape of a dataset");
  fp->add_option("--data", fa.data, "CSV file")->required();
  fp->add_option("--label", fa.label, "Label column; enables the shape summary");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*exp) return cmd_experiment(*exp, ea, out, err);
    if (*uqc) return cmd_uq(ua, out, err);
    if (*fp) return cmd_fingerprint(fa, out, err);
  } catch (const ensuq::Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace uq
