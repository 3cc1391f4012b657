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
#include <variant>

#include "wsnfd/dataset.hpp"
#include "wsnfd/network.hpp"
#include "wsnfd/pca.hpp"
#include "wsnfd/swarm.hpp"

namespace wsnfd {

enum class OptimizerKind { Goa, Pso };

std::string_view to_string(OptimizerKind kind) noexcept;
OptimizerKind parse_optimizer_kind(std::string_view name);

/// Min-max scaling followed by PCA projection, both fitted on training data.
struct Preprocessing {
  MinMaxScaler scaler;
  PcaModel pca;

  /// Raw features -> network inputs; never refits either stage.
  Matrix apply(const Matrix& raw) const;
  LabeledDataset apply(const LabeledDataset& raw) const;

  bool operator==(const Preprocessing&) const = default;
};

struct TrainingTask {
  NetworkSpec spec;
  LabeledDataset train_set;  // in network input space
  LabeledDataset val_set;
  OptimizerKind optimizer = OptimizerKind::Goa;
  std::variant<GoaConfig, PsoConfig> optimizer_config = GoaConfig{};
  std::uint64_t seed = 0;
  Preprocessing preprocessing;  // carried into the trained model

  void validate() const;
};

struct TrainedModel {
  NetworkSpec spec;
  ParameterVector params;
  Preprocessing preprocessing;
  OptimizerRun run;
  OptimizerKind optimizer = OptimizerKind::Goa;
  std::uint64_t seed = 0;

  /// Predictions on raw (unscaled, unprojected) features.
  Predictions predict_raw(const Matrix& raw) const;

  bool operator==(const TrainedModel&) const = default;
};

/// 1 - validation accuracy.
double fitness(std::span<const double> params, const NetworkSpec& spec, const LabeledDataset& val_set);

/// Objective adapter over the fitness, suitable for the swarm optimizers.
Objective make_fitness_objective(const NetworkSpec& spec, const LabeledDataset& val_set);

/// Runs the configured optimizer over param_count(spec) dimensions. The task
/// seed replaces the optimizer config seed; empty bounds default to [-5, 5].
TrainedModel train(const TrainingTask& task, const IterationObserver& observer = {});

}  // namespace wsnfd
