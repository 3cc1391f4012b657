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

#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsnfd/dataset.hpp"
#include "wsnfd/error.hpp"
#include "wsnfd/metrics.hpp"
#include "wsnfd/serialization.hpp"
#include "wsnfd/trainer.hpp"

namespace wsnfd {

struct DataSourceConfig {
  std::string path;  // delimited text file; ignored when `synthetic` is set
  std::string label_column = "label";
  std::string synthetic;  // "", "sensor" or "blobs"
  std::size_t samples = 4688;
  std::size_t features = 12;  // blobs only
  double separation = 3.0;    // blobs only
  std::uint64_t seed = 42;

  bool operator==(const DataSourceConfig&) const = default;
};

/// Everything a run depends on. Serialized verbatim (minus `threads`) into every artifact.
struct PipelineConfig {
  DataSourceConfig data;
  double pca_threshold = 0.995;
  std::vector<std::size_t> hidden_layers{8, 7, 6, 5, 4, 3};
  OptimizerKind optimizer = OptimizerKind::Goa;
  GoaConfig goa;
  PsoConfig pso;
  double weight_bound = 5.0;
  double train_fraction = 0.4;
  double val_fraction_of_train = 0.25;
  std::vector<std::uint64_t> seeds{1};
  std::vector<FaultSpec> faults;  // empty selects the four default scenarios
  bool paper_faithful = false;    // fit scaler and PCA on the full dataset before splitting
  std::size_t folds = 10;
  std::size_t repeats = 5;
  std::vector<OptimizerKind> compare{OptimizerKind::Goa, OptimizerKind::Pso};
  std::size_t threads = 1;

  void validate() const;
  /// [k, hidden..., 2] for a k-dimensional PCA output.
  NetworkSpec network_for(std::size_t input_size) const;
};

Json config_to_json(const PipelineConfig& config);
/// Overlays every key present in `j` onto `config`; absent keys keep their values.
void apply_config_json(const Json& j, PipelineConfig& config);
/// Accepts a bare config, any JSON artifact (its "config"), or a CSV artifact (its header line).
Json config_json_from_file(const std::filesystem::path& path);

/// Failure of a named pipeline stage ("config", "load", "normalize", "split", "pca", "train", "evaluate", "write").
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, ErrorKind kind, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)), kind_(kind) {}
  const std::string& stage() const noexcept { return stage_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string stage_;
  ErrorKind kind_;
};

/// 1 usage error, 2 data error, 3 numerical failure.
int exit_code_for(ErrorKind kind) noexcept;

/// Runs `body`, converting library errors into a StageError tagged with `stage`.
template <typename Body>
auto run_stage(const char* stage, Body&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw StageError(stage, e.kind(), e.what());
  }
}

LabeledDataset load_source(const DataSourceConfig& source, std::size_t* rejected_rows = nullptr);

Preprocessing fit_preprocessing(const LabeledDataset& raw_fit_set, double threshold);

struct PreparedData {
  LabeledDataset raw;
  std::size_t rejected_rows = 0;
  Partition partition;  // raw features
  Preprocessing preprocessing;
  LabeledDataset train;  // network input space
  LabeledDataset val;
  LabeledDataset test;
};

PreparedData prepare_data(const PipelineConfig& config, std::uint64_t seed);
PreparedData prepare_data(const PipelineConfig& config, const LabeledDataset& raw, std::uint64_t seed);

struct SplitEvaluation {
  ConfusionCounts confusion;
  MetricSet metrics;
  RocCurve roc;
};

/// Metrics for a dataset already in network input space.
SplitEvaluation evaluate_split(const TrainedModel& model, const LabeledDataset& network_inputs);

TrainingTask make_task(const PipelineConfig& config, const PreparedData& prepared, OptimizerKind optimizer,
                       std::uint64_t seed);

struct PipelineResult {
  PreparedData prepared;
  TrainedModel model;
  SplitEvaluation train;
  SplitEvaluation val;
  SplitEvaluation test;
};

/// load -> normalize -> split -> PCA -> train -> evaluate for one seed.
PipelineResult run_pipeline(const PipelineConfig& config, std::uint64_t seed);
PipelineResult run_pipeline(const PipelineConfig& config, const LabeledDataset& raw, std::uint64_t seed);

struct FoldResult {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::uint64_t split_seed = 0;
  std::uint64_t train_seed = 0;
  std::size_t retained_components = 0;
  SplitEvaluation test;
};

struct MetricStats {
  SummaryStats accuracy;
  SummaryStats precision;
  SummaryStats recall;
  SummaryStats f1;
};

MetricStats metric_stats(const std::vector<MetricSet>& sets, double confidence = 0.95);

struct CrossvalResult {
  std::vector<FoldResult> folds;
  std::vector<MetricSet> repeat_means;
  MetricStats over_folds;    // over every fold of every repeat
  MetricStats over_repeats;  // over per-repeat means (needs >= 2 repeats)
  bool has_repeat_stats = false;
};

/// Repeat r uses seeds[r] when present, else seeds[0] + r, for the fold assignment.
CrossvalResult run_crossval(const PipelineConfig& config);
CrossvalResult run_crossval(const PipelineConfig& config, const LabeledDataset& raw);

struct FaultScenarioResult {
  FaultSpec spec;
  std::size_t affected_rows = 0;
  SplitEvaluation eval;
};

/// Columns of the first sensor channel: every column whose name shares the
/// first column's prefix before '_' (T1_t0, T1_t1, T1_t2 on the sensor schema).
std::vector<std::size_t> first_channel_columns(const std::vector<std::string>& feature_names);

/// One scenario per fault kind at its default magnitude, on the first sensor channel.
std::vector<FaultSpec> default_fault_scenarios(const std::vector<std::string>& feature_names, std::uint64_t seed);

/// config.faults when given (empty target lists mean the first channel), else the defaults.
std::vector<FaultSpec> resolve_faults(const PipelineConfig& config, const std::vector<std::string>& feature_names,
                                      std::uint64_t seed);

/// Injects each fault into the min-max scaled copy of `raw` and evaluates the model on it.
std::vector<FaultScenarioResult> run_fault_scenarios(const std::vector<FaultSpec>& faults, const TrainedModel& model,
                                                     const LabeledDataset& raw);

struct CompareEntry {
  OptimizerKind optimizer = OptimizerKind::Goa;
  std::uint64_t seed = 0;
  OptimizerRun run;
  SplitEvaluation test;
  std::size_t plateau = 0;
};

/// Trains every optimizer in config.compare on identical data and seeds.
std::vector<CompareEntry> run_compare(const PipelineConfig& config);
std::vector<CompareEntry> run_compare(const PipelineConfig& config, const LabeledDataset& raw);

}  // namespace wsnfd
