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

#include "wsnfd/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <string>

namespace wsnfd {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, message);
}

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

template <typename T>
void read_if_present(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

Json data_to_json(const DataSourceConfig& d) {
  return Json{{"path", d.path},         {"label_column", d.label_column}, {"synthetic", d.synthetic},
              {"samples", d.samples},   {"features", d.features},         {"separation", d.separation},
              {"seed", d.seed}};
}

void apply_data_json(const Json& j, DataSourceConfig& d) {
  static const std::set<std::string> known{"path", "label_column", "synthetic", "samples",
                                           "features", "separation", "seed"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw Error(ErrorKind::InvalidArgument, "unknown data config key '" + key + "'");
  read_if_present(j, "path", d.path);
  read_if_present(j, "label_column", d.label_column);
  read_if_present(j, "synthetic", d.synthetic);
  read_if_present(j, "samples", d.samples);
  read_if_present(j, "features", d.features);
  read_if_present(j, "separation", d.separation);
  read_if_present(j, "seed", d.seed);
}

SplitEvaluation evaluate_predictions(const Predictions& p, const std::vector<int>& labels) {
  SplitEvaluation e;
  e.confusion = confusion(labels, p.labels);
  e.metrics = classification_metrics(e.confusion);
  e.roc = roc_auc(p.scores, labels);
  return e;
}

std::vector<double> column(const std::vector<MetricSet>& sets, double MetricSet::*field) {
  std::vector<double> out;
  out.reserve(sets.size());
  for (const auto& s : sets) out.push_back(s.*field);
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  require(data.synthetic.empty() || data.synthetic == "sensor" || data.synthetic == "blobs",
          "synthetic must be empty, 'sensor' or 'blobs'");
  require(!data.synthetic.empty() || !data.path.empty(), "no data source: give a path or a synthetic kind");
  if (!data.synthetic.empty()) require(data.samples >= 4, "synthetic datasets need at least 4 samples");
  if (data.synthetic == "blobs") require(data.features >= 1, "blobs need at least one feature");
  require(pca_threshold > 0.0 && pca_threshold <= 1.0, "pca_threshold must lie in (0, 1]");
  require(!hidden_layers.empty(), "hidden_layers must not be empty");
  for (auto w : hidden_layers) require(w >= 1 && w <= 256, "hidden layer widths must lie in [1, 256]");
  require(weight_bound > 0.0, "weight_bound must be positive");
  require(in_open_unit(train_fraction), "train_fraction must lie in (0, 1)");
  require(in_open_unit(val_fraction_of_train), "val_fraction_of_train must lie in (0, 1)");
  require(!seeds.empty(), "at least one seed is required");
  require(folds >= 2, "folds must be at least 2");
  require(repeats >= 1, "repeats must be at least 1");
  require(!compare.empty(), "compare needs at least one optimizer");
  auto goa_checked = goa;
  goa_checked.bounds = Bounds::uniform(1, -weight_bound, weight_bound);
  goa_checked.validate();
  auto pso_checked = pso;
  pso_checked.bounds = goa_checked.bounds;
  pso_checked.validate();
}

NetworkSpec PipelineConfig::network_for(std::size_t input_size) const {
  NetworkSpec spec;
  spec.layer_sizes.clear();
  spec.layer_sizes.push_back(input_size);
  spec.layer_sizes.insert(spec.layer_sizes.end(), hidden_layers.begin(), hidden_layers.end());
  spec.layer_sizes.push_back(2);
  spec.validate();
  return spec;
}

Json config_to_json(const PipelineConfig& c) {
  Json compare = Json::array();
  for (auto k : c.compare) compare.push_back(to_string(k));
  return Json{{"data", data_to_json(c.data)},
              {"pca_threshold", c.pca_threshold},
              {"hidden_layers", c.hidden_layers},
              {"optimizer", to_string(c.optimizer)},
              {"goa", c.goa},
              {"pso", c.pso},
              {"weight_bound", c.weight_bound},
              {"train_fraction", c.train_fraction},
              {"val_fraction_of_train", c.val_fraction_of_train},
              {"seeds", c.seeds},
              {"faults", c.faults},
              {"paper_faithful", c.paper_faithful},
              {"folds", c.folds},
              {"repeats", c.repeats},
              {"compare", compare}};
}

void apply_config_json(const Json& j, PipelineConfig& c) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "config must be a JSON object");
  static const std::set<std::string> known{"data",    "pca_threshold",  "hidden_layers", "optimizer",
                                           "goa",     "pso",            "weight_bound",  "train_fraction",
                                           "val_fraction_of_train",     "seeds",         "faults",
                                           "paper_faithful",            "folds",         "repeats",
                                           "compare"};
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
  try {
    if (j.contains("data")) apply_data_json(j.at("data"), c.data);
    read_if_present(j, "pca_threshold", c.pca_threshold);
    read_if_present(j, "hidden_layers", c.hidden_layers);
    if (j.contains("optimizer")) c.optimizer = parse_optimizer_kind(j.at("optimizer").get<std::string>());
    if (j.contains("goa")) from_json(j.at("goa"), c.goa);
    if (j.contains("pso")) from_json(j.at("pso"), c.pso);
    read_if_present(j, "weight_bound", c.weight_bound);
    read_if_present(j, "train_fraction", c.train_fraction);
    read_if_present(j, "val_fraction_of_train", c.val_fraction_of_train);
    read_if_present(j, "seeds", c.seeds);
    read_if_present(j, "faults", c.faults);
    read_if_present(j, "paper_faithful", c.paper_faithful);
    read_if_present(j, "folds", c.folds);
    read_if_present(j, "repeats", c.repeats);
    if (j.contains("compare")) {
      c.compare.clear();
      for (const auto& name : j.at("compare")) c.compare.push_back(parse_optimizer_kind(name.get<std::string>()));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("malformed config: ") + e.what());
  }
}

Json config_json_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
  std::string first;
  std::getline(in, first);
  if (first.starts_with("#") || first.starts_with("<!--")) {
    const auto at = first.find(" config=");
    if (at == std::string::npos) throw Error(ErrorKind::SchemaMismatch, path.string() + ": header has no config");
    try {
      auto text = first.substr(at + 8);
      if (text.ends_with(" -->")) text.resize(text.size() - 4);
      return Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw Error(ErrorKind::SchemaMismatch, path.string() + ": " + e.what());
    }
  }
  auto j = read_json_file(path);
  if (j.is_object() && j.contains("config")) return j.at("config");
  if (j.is_object() && j.contains("provenance") && j.at("provenance").contains("config"))
    return j.at("provenance").at("config");
  return j;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::SchemaMismatch:
      return 1;
    case ErrorKind::ZeroVarianceColumn:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NoConvergence:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::NonFiniteCost:
    case ErrorKind::ZeroVarianceDifferences:
      return 3;
    default:
      return 2;
  }
}

LabeledDataset load_source(const DataSourceConfig& source, std::size_t* rejected_rows) {
  if (rejected_rows) *rejected_rows = 0;
  if (source.synthetic == "sensor") return synthesize_sensor_dataset(source.samples, source.seed);
  if (source.synthetic == "blobs")
    return synthesize_dataset(source.samples, source.features, source.separation, source.seed);
  auto loaded = load_dataset(source.path, source.label_column);
  if (rejected_rows) *rejected_rows = loaded.rejected_rows;
  return std::move(loaded.data);
}

Preprocessing fit_preprocessing(const LabeledDataset& raw_fit_set, double threshold) {
  Preprocessing pre;
  auto normalized = run_stage("normalize", [&] { return min_max_normalize(raw_fit_set); });
  pre.scaler = std::move(normalized.scaler);
  pre.pca = run_stage("pca", [&] { return fit_pca(normalized.data.features, threshold); });
  return pre;
}

PreparedData prepare_data(const PipelineConfig& config, std::uint64_t seed) {
  std::size_t rejected = 0;
  auto raw = run_stage("load", [&] { return load_source(config.data, &rejected); });
  auto prepared = prepare_data(config, raw, seed);
  prepared.rejected_rows = rejected;
  return prepared;
}

PreparedData prepare_data(const PipelineConfig& config, const LabeledDataset& raw, std::uint64_t seed) {
  PreparedData out;
  out.raw = raw;
  if (config.paper_faithful) out.preprocessing = fit_preprocessing(raw, config.pca_threshold);
  out.partition = run_stage("split", [&] {
    return stratified_split(raw, config.train_fraction, config.val_fraction_of_train, seed);
  });
  if (!config.paper_faithful) out.preprocessing = fit_preprocessing(out.partition.train, config.pca_threshold);
  run_stage("pca", [&] {
    out.train = out.preprocessing.apply(out.partition.train);
    out.val = out.preprocessing.apply(out.partition.val);
    out.test = out.preprocessing.apply(out.partition.test);
  });
  return out;
}

SplitEvaluation evaluate_split(const TrainedModel& model, const LabeledDataset& network_inputs) {
  return run_stage("evaluate", [&] {
    return evaluate_predictions(predict(model.spec, model.params.values(), network_inputs.features),
                                network_inputs.labels);
  });
}

TrainingTask make_task(const PipelineConfig& config, const PreparedData& prepared, OptimizerKind optimizer,
                       std::uint64_t seed) {
  return run_stage("train", [&] {
    TrainingTask task;
    task.spec = config.network_for(prepared.train.cols());
    task.train_set = prepared.train;
    task.val_set = prepared.val;
    task.optimizer = optimizer;
    task.seed = seed;
    task.preprocessing = prepared.preprocessing;
    const auto bounds = Bounds::uniform(param_count(task.spec), -config.weight_bound, config.weight_bound);
    if (optimizer == OptimizerKind::Goa) {
      auto goa = config.goa;
      goa.bounds = bounds;
      goa.threads = config.threads;
      task.optimizer_config = goa;
    } else {
      auto pso = config.pso;
      pso.bounds = bounds;
      pso.threads = config.threads;
      task.optimizer_config = pso;
    }
    return task;
  });
}

PipelineResult run_pipeline(const PipelineConfig& config, std::uint64_t seed) {
  std::size_t rejected = 0;
  auto raw = run_stage("load", [&] { return load_source(config.data, &rejected); });
  auto result = run_pipeline(config, raw, seed);
  result.prepared.rejected_rows = rejected;
  return result;
}

PipelineResult run_pipeline(const PipelineConfig& config, const LabeledDataset& raw, std::uint64_t seed) {
  run_stage("config", [&] { config.validate(); });
  PipelineResult r;
  r.prepared = prepare_data(config, raw, seed);
  const auto task = make_task(config, r.prepared, config.optimizer, seed);
  r.model = run_stage("train", [&] { return train(task); });
  r.train = evaluate_split(r.model, r.prepared.train);
  r.val = evaluate_split(r.model, r.prepared.val);
  r.test = evaluate_split(r.model, r.prepared.test);
  return r;
}

MetricStats metric_stats(const std::vector<MetricSet>& sets, double confidence) {
  MetricStats s;
  s.accuracy = summary_stats(column(sets, &MetricSet::accuracy), confidence);
  s.precision = summary_stats(column(sets, &MetricSet::precision), confidence);
  s.recall = summary_stats(column(sets, &MetricSet::recall), confidence);
  s.f1 = summary_stats(column(sets, &MetricSet::f1), confidence);
  return s;
}

CrossvalResult run_crossval(const PipelineConfig& config) {
  auto raw = run_stage("load", [&] { return load_source(config.data); });
  return run_crossval(config, raw);
}

CrossvalResult run_crossval(const PipelineConfig& config, const LabeledDataset& raw) {
  run_stage("config", [&] { config.validate(); });
  CrossvalResult out;
  std::optional<Preprocessing> global;
  if (config.paper_faithful) global = fit_preprocessing(raw, config.pca_threshold);

  for (std::size_t r = 0; r < config.repeats; ++r) {
    const std::uint64_t split_seed = r < config.seeds.size() ? config.seeds[r] : config.seeds[0] + r;
    const auto folds = run_stage("split", [&] { return stratified_kfold(raw, config.folds, split_seed); });
    std::vector<MetricSet> repeat_sets;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      FoldResult fr;
      fr.repeat = r;
      fr.fold = f;
      fr.split_seed = split_seed;
      fr.train_seed = split_seed * 1000 + f;
      const auto carved = run_stage("split", [&] {
        return stratified_holdout(folds[f].train, config.val_fraction_of_train, fr.train_seed);
      });
      PreparedData prepared;
      prepared.preprocessing = global ? *global : fit_preprocessing(carved.rest, config.pca_threshold);
      run_stage("pca", [&] {
        prepared.train = prepared.preprocessing.apply(carved.rest);
        prepared.val = prepared.preprocessing.apply(carved.holdout);
        prepared.test = prepared.preprocessing.apply(folds[f].test);
      });
      fr.retained_components = prepared.preprocessing.pca.retained;
      const auto task = make_task(config, prepared, config.optimizer, fr.train_seed);
      const auto model = run_stage("train", [&] { return train(task); });
      fr.test = evaluate_split(model, prepared.test);
      repeat_sets.push_back(fr.test.metrics);
      out.folds.push_back(std::move(fr));
    }
    MetricSet mean;
    const auto n = static_cast<double>(repeat_sets.size());
    for (const auto& m : repeat_sets) {
      mean.accuracy += m.accuracy / n;
      mean.precision += m.precision / n;
      mean.recall += m.recall / n;
      mean.f1 += m.f1 / n;
    }
    out.repeat_means.push_back(mean);
  }

  std::vector<MetricSet> all;
  for (const auto& f : out.folds) all.push_back(f.test.metrics);
  out.over_folds = run_stage("evaluate", [&] { return metric_stats(all); });
  if (out.repeat_means.size() >= 2) {
    out.over_repeats = run_stage("evaluate", [&] { return metric_stats(out.repeat_means); });
    out.has_repeat_stats = true;
  }
  return out;
}

std::vector<std::size_t> first_channel_columns(const std::vector<std::string>& feature_names) {
  if (feature_names.empty()) return {0};
  const auto& first = feature_names.front();
  const auto cut = first.find('_');
  if (cut == std::string::npos) return {0};
  const auto prefix = first.substr(0, cut + 1);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < feature_names.size(); ++i)
    if (feature_names[i].starts_with(prefix)) out.push_back(i);
  return out;
}

std::vector<FaultSpec> default_fault_scenarios(const std::vector<std::string>& feature_names, std::uint64_t seed) {
  const auto columns = first_channel_columns(feature_names);
  std::vector<FaultSpec> out;
  for (auto kind : {FaultKind::Offset, FaultKind::Gain, FaultKind::StuckAt, FaultKind::OutOfRange})
    out.push_back(FaultSpec::defaults(kind, columns, seed));
  return out;
}

std::vector<FaultSpec> resolve_faults(const PipelineConfig& config, const std::vector<std::string>& feature_names,
                                      std::uint64_t seed) {
  if (config.faults.empty()) return default_fault_scenarios(feature_names, seed);
  auto faults = config.faults;
  for (auto& f : faults)
    if (f.target_columns.empty()) f.target_columns = first_channel_columns(feature_names);
  return faults;
}

std::vector<FaultScenarioResult> run_fault_scenarios(const std::vector<FaultSpec>& faults, const TrainedModel& model,
                                                     const LabeledDataset& raw) {
  const auto scaled = run_stage("normalize", [&] { return model.preprocessing.scaler.transform(raw); });
  std::vector<FaultScenarioResult> out;
  for (const auto& spec : faults) {
    FaultScenarioResult r;
    r.spec = spec;
    const auto injected = run_stage("evaluate", [&] { return inject_fault(scaled, spec); });
    r.affected_rows = injected.affected_rows.size();
    const auto inputs = run_stage("pca", [&] { return transform(model.preprocessing.pca, injected.data); });
    r.eval = evaluate_split(model, inputs);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<CompareEntry> run_compare(const PipelineConfig& config) {
  auto raw = run_stage("load", [&] { return load_source(config.data); });
  return run_compare(config, raw);
}

std::vector<CompareEntry> run_compare(const PipelineConfig& config, const LabeledDataset& raw) {
  run_stage("config", [&] { config.validate(); });
  std::vector<CompareEntry> out;
  for (auto seed : config.seeds) {
    const auto prepared = prepare_data(config, raw, seed);
    for (auto kind : config.compare) {
      const auto task = make_task(config, prepared, kind, seed);
      const auto model = run_stage("train", [&] { return train(task); });
      CompareEntry e;
      e.optimizer = kind;
      e.seed = seed;
      e.run = model.run;
      e.test = evaluate_split(model, prepared.test);
      e.plateau = plateau_iteration(e.run.convergence);
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace wsnfd
