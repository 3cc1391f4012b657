// Copyright 2026 The wsnfd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wsnfd/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace wsnfd {
namespace {

namespace fs = std::filesystem;

std::string fmt(double v) { return format_double(v); }

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

class Artifacts {
 public:
  Artifacts(fs::path dir, std::string command, const PipelineConfig& config)
      : dir_(std::move(dir)), command_(std::move(command)), config_(config) {}

  Artifacts nested(const std::string& sub) const {
    Artifacts child(dir_ / sub, command_, config_);
    child.written_ = written_;
    return child;
  }

  void json(const std::string& name, Json body) {
    write(name, dump_json(with_provenance(std::move(body), command_, config_)));
  }

  void csv(const std::string& name, const std::string& header, const std::vector<std::string>& lines) {
    std::string text = csv_provenance_line(command_, config_) + "\n" + header + "\n";
    for (const auto& line : lines) text += line + "\n";
    write(name, text);
  }

  void text(const std::string& name, const std::string& contents) { write(name, contents); }

  std::string provenance() const { return csv_provenance_line(command_, config_).substr(2); }
  const std::vector<fs::path>& written() const { return *written_; }

 private:
  void write(const std::string& name, const std::string& contents) {
    const auto path = dir_ / name;
    run_stage("write", [&] { write_text_file(path, contents); });
    written_->push_back(path);
  }

  fs::path dir_;
  std::string command_;
  const PipelineConfig& config_;
  std::shared_ptr<std::vector<fs::path>> written_ = std::make_shared<std::vector<fs::path>>();
};

Json split_json(const SplitEvaluation& e) {
  return Json{{"confusion", e.confusion}, {"metrics", e.metrics}, {"auc", e.roc.auc}};
}

Json roc_points_json(const RocCurve& roc) {
  Json pts = Json::array();
  for (const auto& p : roc.points) pts.push_back({p.fpr, p.tpr});
  return pts;
}

std::vector<std::string> roc_lines(const RocCurve& roc) {
  std::vector<std::string> lines;
  for (const auto& p : roc.points) lines.push_back(fmt(p.fpr) + "," + fmt(p.tpr) + "," + fmt(p.threshold));
  return lines;
}

Json stats_json(const MetricStats& s) {
  return Json{{"accuracy", s.accuracy}, {"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

Json table_json(const MetricStats& s) {
  return Json{{"accuracy", format_percent_mean_std(s.accuracy.mean, s.accuracy.std)},
              {"precision", format_percent_mean_std(s.precision.mean, s.precision.std)},
              {"recall", format_percent_mean_std(s.recall.mean, s.recall.std)},
              {"f1", format_percent_mean_std(s.f1.mean, s.f1.std)}};
}

/// Report layout shared by every evaluating command.
Json evaluation_report(const SplitEvaluation& e) {
  return Json{{"confusion", e.confusion},
              {"metrics", e.metrics},
              {"auc", e.roc.auc},
              {"roc_points", roc_points_json(e.roc)},
              {"per_fold", Json::array()},
              {"stats", Json::object()},
              {"t_tests", Json::array()}};
}

Json data_summary(const LabeledDataset& raw, std::size_t rejected) {
  return Json{{"rows", raw.rows()},
              {"columns", raw.cols()},
              {"feature_names", raw.feature_names},
              {"normal", raw.count(kNormal)},
              {"faulty", raw.count(kFaulty)},
              {"rejected_rows", rejected},
              {"source", raw.source}};
}

Json counts_json(const LabeledDataset& d) {
  return Json{{"rows", d.rows()}, {"normal", d.count(kNormal)}, {"faulty", d.count(kFaulty)}};
}

std::vector<std::string> eigen_curve_lines(const PcaModel& pca) {
  const auto shares = normalized_spectrum(pca.eigenvalues);
  std::vector<std::string> lines;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i) {
    cumulative += shares[i];
    lines.push_back(std::to_string(i + 1) + "," + fmt(pca.eigenvalues[i]) + "," + fmt(shares[i]) + "," +
                    fmt(cumulative));
  }
  return lines;
}

Json pca_summary(const PcaModel& pca, double threshold) {
  const auto shares = normalized_spectrum(pca.eigenvalues);
  std::vector<double> cumulative;
  double acc = 0.0;
  for (double s : shares) cumulative.push_back(acc += s);
  return Json{{"retained", pca.retained},
              {"feature_count", pca.feature_count()},
              {"threshold", threshold},
              {"eigenvalues", pca.eigenvalues},
              {"explained", shares},
              {"cumulative", cumulative}};
}

const std::string kEigenHeader = "component,eigenvalue,explained,cumulative";
const std::string kRocHeader = "fpr,tpr,threshold";

void write_preprocessing(Artifacts& out, const Preprocessing& pre) {
  out.json("scaler.json", Json(pre.scaler));
  out.json("pca.json", Json(pre.pca));
}

void write_training_run(Artifacts& out, const PipelineConfig& config, const PipelineResult& r, std::uint64_t seed) {
  auto model = model_to_json(r.model);
  out.json("model.json", model);
  write_preprocessing(out, r.model.preprocessing);
  out.csv("eigen_curve.csv", kEigenHeader, eigen_curve_lines(r.model.preprocessing.pca));

  std::vector<std::string> conv;
  for (std::size_t t = 0; t < r.model.run.convergence.size(); ++t)
    conv.push_back(std::to_string(t) + "," + fmt(r.model.run.convergence[t]));
  out.csv("convergence.csv", "iteration,best_cost", conv);
  out.csv("roc_train.csv", kRocHeader, roc_lines(r.train.roc));
  out.csv("roc_test.csv", kRocHeader, roc_lines(r.test.roc));

  auto report = evaluation_report(r.test);
  report["kind"] = "wsnfd.report";
  report["seed"] = seed;
  report["data"] = data_summary(r.prepared.raw, r.prepared.rejected_rows);
  report["splits"] = Json{{"train", split_json(r.train)}, {"validation", split_json(r.val)},
                          {"test", split_json(r.test)}};
  report["split_sizes"] = Json{{"train", counts_json(r.prepared.partition.train)},
                               {"validation", counts_json(r.prepared.partition.val)},
                               {"test", counts_json(r.prepared.partition.test)}};
  report["pca"] = pca_summary(r.model.preprocessing.pca, config.pca_threshold);
  report["network"] = Json{{"layer_sizes", r.model.spec}, {"param_count", param_count(r.model.spec)}};
  const auto& conv_curve = r.model.run.convergence;
  report["optimizer"] = Json{{"kind", to_string(r.model.optimizer)},
                             {"initial_best_cost", conv_curve.front()},
                             {"best_cost", r.model.run.best_cost},
                             {"evaluations", r.model.run.evaluations},
                             {"iterations", conv_curve.size() - 1},
                             {"plateau_iteration", plateau_iteration(conv_curve)}};
  out.json("report.json", report);
}

void command_prepare(Artifacts& out, const PipelineConfig& config, std::ostream& log) {
  const auto seed = config.seeds.front();
  const auto prepared = prepare_data(config, seed);
  const auto& p = prepared.partition;
  write_preprocessing(out, prepared.preprocessing);
  out.json("split.json", Json{{"seed", seed},
                              {"data", data_summary(prepared.raw, prepared.rejected_rows)},
                              {"counts", Json{{"train", counts_json(p.train)},
                                              {"validation", counts_json(p.val)},
                                              {"test", counts_json(p.test)}}},
                              {"train_rows", p.train_rows},
                              {"val_rows", p.val_rows},
                              {"test_rows", p.test_rows}});
  for (const auto& [name, part] : {std::pair{"train.csv", &p.train}, {"val.csv", &p.val}, {"test.csv", &p.test}})
    out.text(name, dataset_csv_text(*part, out.provenance()));
  log << "prepare: " << prepared.raw.rows() << " rows (" << prepared.rejected_rows << " rejected), split "
      << p.train.rows() << "/" << p.val.rows() << "/" << p.test.rows() << "\n";
}

void command_pca(Artifacts& out, const PipelineConfig& config, std::ostream& log) {
  const auto prepared = prepare_data(config, config.seeds.front());
  const auto& pca = prepared.preprocessing.pca;
  write_preprocessing(out, prepared.preprocessing);
  out.csv("eigen_curve.csv", kEigenHeader, eigen_curve_lines(pca));
  auto summary = pca_summary(pca, config.pca_threshold);
  summary["seed"] = config.seeds.front();
  out.json("pca_report.json", summary);
  log << "pca: retained " << pca.retained << " of " << pca.feature_count() << " components\n";
}

void command_train(Artifacts& out, const PipelineConfig& config, std::ostream& log) {
  std::size_t rejected = 0;
  const auto raw = run_stage("load", [&] { return load_source(config.data, &rejected); });
  const bool multi = config.seeds.size() > 1;
  Json per_seed = Json::array();
  std::vector<MetricSet> tests;
  for (auto seed : config.seeds) {
    auto r = run_pipeline(config, raw, seed);
    r.prepared.rejected_rows = rejected;
    auto dir = multi ? out.nested("seed_" + std::to_string(seed)) : out;
    write_training_run(dir, config, r, seed);
    per_seed.push_back(Json{{"seed", seed}, {"test", split_json(r.test)}, {"best_cost", r.model.run.best_cost}});
    tests.push_back(r.test.metrics);
    log << "train: seed " << seed << " test accuracy " << fixed4(r.test.metrics.accuracy) << " auc "
        << fixed4(r.test.roc.auc) << " (k=" << r.model.preprocessing.pca.retained << ")\n";
  }
  if (multi) {
    Json summary{{"kind", "wsnfd.seed_summary"}, {"per_seed", per_seed}};
    const auto stats = run_stage("evaluate", [&] { return metric_stats(tests); });
    summary["stats"] = stats_json(stats);
    summary["table"] = table_json(stats);
    out.json("summary.json", summary);
  }
}

void command_eval(Artifacts& out, const CommandRequest& req, std::ostream& log) {
  const auto& config = req.config;
  if (req.model_path.empty()) throw StageError("config", ErrorKind::InvalidArgument, "eval needs --model");
  const auto model = run_stage("load", [&] { return model_from_json(read_json_file(req.model_path)); });
  const auto raw = run_stage("load", [&] { return load_source(config.data); });
  const auto target = req.all_rows ? raw : run_stage("split", [&] {
    return stratified_split(raw, config.train_fraction, config.val_fraction_of_train, config.seeds.front()).test;
  });
  if (target.cols() != model.preprocessing.scaler.mins.size())
    throw StageError("evaluate", ErrorKind::DimensionMismatch, "dataset width does not match the model");
  const auto inputs = run_stage("pca", [&] { return model.preprocessing.apply(target); });
  const auto e = evaluate_split(model, inputs);
  auto report = evaluation_report(e);
  report["kind"] = "wsnfd.eval";
  report["scope"] = req.all_rows ? "all_rows" : "test_partition";
  report["rows"] = counts_json(target);
  report["model"] = Json{{"layer_sizes", model.spec}, {"optimizer", to_string(model.optimizer)}, {"seed", model.seed}};
  out.json("eval_report.json", report);
  out.csv("roc_eval.csv", kRocHeader, roc_lines(e.roc));
  log << "eval: accuracy " << fixed4(e.metrics.accuracy) << " auc " << fixed4(e.roc.auc) << " on " << target.rows()
      << " rows\n";
}

void command_crossval(Artifacts& out, const PipelineConfig& config, std::ostream& log) {
  const auto cv = run_crossval(config);
  Json folds = Json::array();
  std::vector<std::string> lines;
  ConfusionCounts pooled;
  double auc_sum = 0.0;
  for (const auto& f : cv.folds) {
    folds.push_back(Json{{"repeat", f.repeat},
                         {"fold", f.fold},
                         {"split_seed", f.split_seed},
                         {"train_seed", f.train_seed},
                         {"retained_components", f.retained_components},
                         {"confusion", f.test.confusion},
                         {"metrics", f.test.metrics},
                         {"auc", f.test.roc.auc}});
    const auto& m = f.test.metrics;
    lines.push_back(std::to_string(f.repeat) + "," + std::to_string(f.fold) + "," + fmt(m.accuracy) + "," +
                    fmt(m.precision) + "," + fmt(m.recall) + "," + fmt(m.f1) + "," + fmt(f.test.roc.auc));
    pooled.tp += f.test.confusion.tp;
    pooled.tn += f.test.confusion.tn;
    pooled.fp += f.test.confusion.fp;
    pooled.fn += f.test.confusion.fn;
    auc_sum += f.test.roc.auc;
  }
  Json repeats = Json::array();
  for (std::size_t r = 0; r < cv.repeat_means.size(); ++r)
    repeats.push_back(Json{{"repeat", r}, {"metrics", cv.repeat_means[r]}});

  Json report{{"kind", "wsnfd.crossval"},
              {"confusion", pooled},
              {"metrics", classification_metrics(pooled)},
              {"auc", auc_sum / static_cast<double>(cv.folds.size())},
              {"roc_points", Json::array()},
              {"per_fold", folds},
              {"per_repeat", repeats},
              {"stats", stats_json(cv.over_folds)},
              {"table", table_json(cv.over_folds)},
              {"t_tests", Json::array()}};
  if (cv.has_repeat_stats) report["stats_over_repeat_means"] = stats_json(cv.over_repeats);
  out.json("crossval.json", report);
  out.csv("crossval_folds.csv", "repeat,fold,accuracy,precision,recall,f1,auc", lines);

  std::vector<std::string> summary;
  const std::pair<const char*, const SummaryStats*> rows[] = {{"accuracy", &cv.over_folds.accuracy},
                                                              {"precision", &cv.over_folds.precision},
                                                              {"recall", &cv.over_folds.recall},
                                                              {"f1", &cv.over_folds.f1}};
  for (const auto& [name, s] : rows)
    summary.push_back(std::string(name) + "," + fmt(s->mean) + "," + fmt(s->std) + "," + fmt(s->ci_low) + "," +
                      fmt(s->ci_high) + "," + format_percent_mean_std(s->mean, s->std));
  out.csv("crossval_summary.csv", "metric,mean,std,ci_low,ci_high,formatted", summary);
  log << "crossval: " << cv.folds.size() << " folds, accuracy "
      << format_percent_mean_std(cv.over_folds.accuracy.mean, cv.over_folds.accuracy.std) << " %\n";
}

void command_inject(Artifacts& out, const CommandRequest& req, std::ostream& log) {
  const auto& config = req.config;
  const auto seed = config.seeds.front();
  TrainedModel model;
  LabeledDataset raw_test;
  if (!req.model_path.empty()) {
    model = run_stage("load", [&] { return model_from_json(read_json_file(req.model_path)); });
    const auto raw = run_stage("load", [&] { return load_source(config.data); });
    raw_test = run_stage("split", [&] {
      return stratified_split(raw, config.train_fraction, config.val_fraction_of_train, seed).test;
    });
  } else {
    auto r = run_pipeline(config, seed);
    model = std::move(r.model);
    raw_test = std::move(r.prepared.partition.test);
  }
  const auto clean_inputs = run_stage("pca", [&] { return model.preprocessing.apply(raw_test); });
  const auto clean = evaluate_split(model, clean_inputs);
  const auto faults = run_stage("config", [&] { return resolve_faults(config, raw_test.feature_names, seed); });
  const auto results = run_fault_scenarios(faults, model, raw_test);

  const auto scaled = model.preprocessing.scaler.transform(raw_test);
  Json scenarios = Json::array();
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const double drop = clean.metrics.accuracy - r.eval.metrics.accuracy;
    scenarios.push_back(Json{{"fault", r.spec},
                             {"affected_rows", r.affected_rows},
                             {"confusion", r.eval.confusion},
                             {"metrics", r.eval.metrics},
                             {"auc", r.eval.roc.auc},
                             {"accuracy_drop", drop}});
    const auto& m = r.eval.metrics;
    const std::string kind(to_string(r.spec.kind));
    lines.push_back(std::to_string(i) + "," + kind + "," + fmt(r.spec.magnitude) + "," +
                    fmt(r.spec.affected_fraction) + "," + std::to_string(r.affected_rows) + "," + fmt(m.accuracy) +
                    "," + fmt(m.precision) + "," + fmt(m.recall) + "," + fmt(m.f1) + "," + fmt(r.eval.roc.auc) + "," +
                    fmt(drop));
    const auto injected = run_stage("evaluate", [&] { return inject_fault(scaled, r.spec); });
    out.text("faulted_" + std::to_string(i) + "_" + kind + ".csv", dataset_csv_text(injected.data, out.provenance()));
    log << "inject: " << kind << " accuracy " << fixed4(m.accuracy) << " (clean " << fixed4(clean.metrics.accuracy)
        << ")\n";
  }
  auto report = evaluation_report(clean);
  report["kind"] = "wsnfd.faults";
  report["scenarios"] = scenarios;
  out.json("faults.json", report);
  out.csv("faults.csv",
          "scenario,kind,magnitude,affected_fraction,affected_rows,accuracy,precision,recall,f1,auc,accuracy_drop",
          lines);
}

void command_compare(Artifacts& out, const PipelineConfig& config, std::ostream& log) {
  const auto entries = run_compare(config);
  const auto& kinds = config.compare;
  const auto& seeds = config.seeds;
  auto find = [&](OptimizerKind k, std::uint64_t s) -> const CompareEntry& {
    return *std::find_if(entries.begin(), entries.end(),
                         [&](const CompareEntry& e) { return e.optimizer == k && e.seed == s; });
  };

  Json runs = Json::array();
  for (const auto& e : entries)
    runs.push_back(Json{{"optimizer", to_string(e.optimizer)},
                        {"seed", e.seed},
                        {"initial_best_cost", e.run.convergence.front()},
                        {"best_cost", e.run.best_cost},
                        {"evaluations", e.run.evaluations},
                        {"plateau_iteration", e.plateau},
                        {"test", split_json(e.test)}});

  Json per_optimizer = Json::object();
  for (auto k : kinds) {
    std::vector<MetricSet> sets;
    double plateau = 0.0;
    double cost = 0.0;
    for (auto s : seeds) {
      const auto& e = find(k, s);
      sets.push_back(e.test.metrics);
      plateau += static_cast<double>(e.plateau) / static_cast<double>(seeds.size());
      cost += e.run.best_cost / static_cast<double>(seeds.size());
    }
    Json j{{"mean_plateau_iteration", plateau}, {"mean_best_cost", cost}};
    if (seeds.size() >= 2) j["stats"] = stats_json(run_stage("evaluate", [&] { return metric_stats(sets); }));
    per_optimizer[std::string(to_string(k))] = j;
  }

  Json t_tests = Json::array();
  Json earlier = Json::object();
  for (std::size_t a = 0; a < kinds.size(); ++a)
    for (std::size_t b = a + 1; b < kinds.size(); ++b) {
      std::vector<double> acc_a, acc_b;
      std::size_t a_first = 0;
      for (auto s : seeds) {
        acc_a.push_back(find(kinds[a], s).test.metrics.accuracy);
        acc_b.push_back(find(kinds[b], s).test.metrics.accuracy);
        if (find(kinds[a], s).plateau < find(kinds[b], s).plateau) ++a_first;
      }
      const std::string pair = std::string(to_string(kinds[a])) + "_vs_" + std::string(to_string(kinds[b]));
      earlier[pair] = Json{{"seeds", seeds.size()}, {"first_plateaus_earlier", a_first}};
      Json t{{"a", to_string(kinds[a])}, {"b", to_string(kinds[b])}, {"metric", "test_accuracy"}};
      try {
        const auto r = paired_t_test(acc_a, acc_b);
        t["t"] = r.t;
        t["p"] = r.p;
        t["df"] = r.df;
      } catch (const Error& e) {
        t["error"] = std::string(to_string(e.kind()));
      }
      t_tests.push_back(t);
    }

  out.json("compare.json", Json{{"kind", "wsnfd.compare"},
                                {"runs", runs},
                                {"per_optimizer", per_optimizer},
                                {"t_tests", t_tests},
                                {"earlier_plateau", earlier}});

  std::string header = "iteration";
  std::size_t length = 0;
  for (const auto& e : entries) {
    header += "," + std::string(to_string(e.optimizer)) + "_seed" + std::to_string(e.seed);
    length = std::max(length, e.run.convergence.size());
  }
  std::vector<std::string> lines;
  for (std::size_t t = 0; t < length; ++t) {
    std::string line = std::to_string(t);
    for (const auto& e : entries) {
      const auto& c = e.run.convergence;
      line += "," + fmt(t < c.size() ? c[t] : c.back());
    }
    lines.push_back(line);
  }
  out.csv("compare_convergence.csv", header, lines);
  for (const auto& e : entries)
    log << "compare: " << to_string(e.optimizer) << " seed " << e.seed << " best cost " << fixed4(e.run.best_cost)
        << " plateau " << e.plateau << " test accuracy " << fixed4(e.test.metrics.accuracy) << "\n";
}

std::string pct(const Json& v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * v.get<double>());
  return buf;
}

void metrics_row(std::ostringstream& md, const std::string& name, const Json& split) {
  const auto& m = split.at("metrics");
  md << "| " << name << " | " << pct(m.at("accuracy")) << " | " << pct(m.at("precision")) << " | "
     << pct(m.at("recall")) << " | " << pct(m.at("f1")) << " | " << fixed4(split.at("auc").get<double>()) << " |\n";
}

void command_report(Artifacts& out, const CommandRequest& req, std::ostream& log) {
  const auto dir = req.input_dir.empty() ? req.output_dir : req.input_dir;
  std::ostringstream md;
  md << "<!-- " << out.provenance() << " -->\n";
  md << "# wsnfd results\n\n";
  bool any = false;
  auto load = [&](const char* name) -> std::optional<Json> {
    if (!fs::exists(dir / name)) return std::nullopt;
    any = true;
    return run_stage("load", [&] { return read_json_file(dir / name); });
  };
  const std::string table_head = "| split | accuracy % | precision % | recall % | F1 % | AUC |\n|---|---|---|---|---|---|\n";
  if (auto r = load("report.json")) {
    md << "## Training run (seed " << r->at("seed") << ")\n\n" << table_head;
    for (const char* s : {"train", "validation", "test"}) metrics_row(md, s, r->at("splits").at(s));
    const auto& c = r->at("confusion");
    md << "\nTest confusion: TP " << c.at("tp") << ", TN " << c.at("tn") << ", FP " << c.at("fp") << ", FN "
       << c.at("fn") << ". PCA kept " << r->at("pca").at("retained") << " of " << r->at("pca").at("feature_count")
       << " components.\n\n";
  }
  if (auto r = load("summary.json")) {
    md << "## Seeds\n\n" << table_head;
    for (const auto& s : r->at("per_seed")) metrics_row(md, "seed " + s.at("seed").dump(), s.at("test"));
    md << "\n";
  }
  if (auto r = load("eval_report.json")) {
    md << "## Evaluation\n\n" << table_head;
    metrics_row(md, "eval", *r);
    md << "\n";
  }
  if (auto r = load("crossval.json")) {
    md << "## Cross-validation (" << r->at("per_fold").size() << " folds)\n\n| metric | mean ± std (%) |\n|---|---|\n";
    for (const char* m : {"accuracy", "precision", "recall", "f1"})
      md << "| " << m << " | " << r->at("table").at(m).get<std::string>() << " |\n";
    md << "\n";
  }
  if (auto r = load("faults.json")) {
    md << "## Fault scenarios\n\n| scenario | accuracy % | drop (pp) |\n|---|---|---|\n";
    md << "| clean | " << pct(r->at("metrics").at("accuracy")) << " | 0.00 |\n";
    for (const auto& s : r->at("scenarios"))
      md << "| " << s.at("fault").at("kind").get<std::string>() << " | " << pct(s.at("metrics").at("accuracy"))
         << " | " << pct(s.at("accuracy_drop")) << " |\n";
    md << "\n";
  }
  if (auto r = load("compare.json")) {
    md << "## Optimizer comparison\n\n| optimizer | seed | best cost | plateau | test accuracy % |\n|---|---|---|---|---|\n";
    for (const auto& e : r->at("runs"))
      md << "| " << e.at("optimizer").get<std::string>() << " | " << e.at("seed") << " | "
         << fixed4(e.at("best_cost").get<double>()) << " | " << e.at("plateau_iteration") << " | "
         << pct(e.at("test").at("metrics").at("accuracy")) << " |\n";
    for (const auto& t : r->at("t_tests"))
      if (t.contains("p"))
        md << "\nPaired t-test " << t.at("a").get<std::string>() << " vs " << t.at("b").get<std::string>()
           << ": t = " << fixed4(t.at("t").get<double>()) << ", p = " << fixed4(t.at("p").get<double>()) << "\n";
    md << "\n";
  }
  if (!any) throw StageError("load", ErrorKind::MissingFile, "no artifacts found in " + dir.string());
  out.text("summary.md", md.str());
  log << md.str();
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"prepare", "pca",    "train",   "eval",
                                              "crossval", "inject", "compare", "report"};
  return names;
}

std::string csv_provenance_line(const std::string& command, const PipelineConfig& config) {
  return "# wsnfd command=" + command + " schema_version=" + std::to_string(kSchemaVersion) +
         " config=" + config_to_json(config).dump();
}

Json with_provenance(Json body, const std::string& command, const PipelineConfig& config) {
  body["schema_version"] = kSchemaVersion;
  body["command"] = command;
  body["config"] = config_to_json(config);
  return body;
}

CommandOutcome run_command(const CommandRequest& req, std::ostream& log) {
  CommandOutcome outcome;
  const auto marker = req.output_dir / ".failed";
  Artifacts out(req.output_dir, req.command, req.config);
  try {
    std::error_code ec;
    fs::remove(marker, ec);
    run_stage("config", [&] {
      if (std::find(command_names().begin(), command_names().end(), req.command) == command_names().end())
        throw Error(ErrorKind::InvalidArgument, "unknown command '" + req.command + "'");
      if (req.command != "report") req.config.validate();
    });
    if (req.command == "prepare") command_prepare(out, req.config, log);
    else if (req.command == "pca") command_pca(out, req.config, log);
    else if (req.command == "train") command_train(out, req.config, log);
    else if (req.command == "eval") command_eval(out, req, log);
    else if (req.command == "crossval") command_crossval(out, req.config, log);
    else if (req.command == "inject") command_inject(out, req, log);
    else if (req.command == "compare") command_compare(out, req.config, log);
    else command_report(out, req, log);
    outcome.written = out.written();
    return outcome;
  } catch (const StageError& e) {
    outcome.error = Json{{"stage", e.stage()}, {"error", to_string(e.kind())}, {"message", e.what()}};
    outcome.exit_code = exit_code_for(e.kind());
  } catch (const Error& e) {
    outcome.error = Json{{"stage", "run"}, {"error", to_string(e.kind())}, {"message", e.what()}};
    outcome.exit_code = exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    outcome.error = Json{{"stage", "write"}, {"error", to_string(ErrorKind::Io)}, {"message", e.what()}};
    outcome.exit_code = exit_code_for(ErrorKind::Io);
  }
  outcome.written = out.written();
  outcome.error["kind"] = "wsnfd.error";
  outcome.error["schema_version"] = kSchemaVersion;
  outcome.error["command"] = req.command;
  outcome.error["exit_code"] = outcome.exit_code;
  log << "error: " << outcome.error.at("message").get<std::string>() << "\n";
  try {
    write_text_file(marker, dump_json(outcome.error));
  } catch (const std::exception& e) {
    log << "error: could not write failure marker: " << e.what() << "\n";
  }
  return outcome;
}

}  // namespace wsnfd
