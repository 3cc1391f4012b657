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

#include "wsnfd/trainer.hpp"

#include <string>

#include "wsnfd/error.hpp"

namespace wsnfd {

std::string_view to_string(OptimizerKind kind) noexcept { return kind == OptimizerKind::Goa ? "goa" : "pso"; }

OptimizerKind parse_optimizer_kind(std::string_view name) {
  if (name == "goa" || name == "GOA") return OptimizerKind::Goa;
  if (name == "pso" || name == "PSO") return OptimizerKind::Pso;
  throw Error(ErrorKind::InvalidArgument, "unknown optimizer '" + std::string(name) + "'");
}

Matrix Preprocessing::apply(const Matrix& raw) const { return transform(pca, scaler.transform(raw)); }

LabeledDataset Preprocessing::apply(const LabeledDataset& raw) const {
  return transform(pca, scaler.transform(raw));
}

void TrainingTask::validate() const {
  spec.validate();
  train_set.validate();
  val_set.validate();
  if (val_set.rows() == 0) throw Error(ErrorKind::EmptyInput, "validation set is empty");
  if (val_set.cols() != spec.input_size() || (train_set.rows() > 0 && train_set.cols() != spec.input_size()))
    throw Error(ErrorKind::DimensionMismatch, "feature dimension " + std::to_string(val_set.cols()) +
                                                  " differs from network input size " +
                                                  std::to_string(spec.input_size()));
  const bool goa = std::holds_alternative<GoaConfig>(optimizer_config);
  if (goa != (optimizer == OptimizerKind::Goa))
    throw Error(ErrorKind::InvalidArgument, "optimizer config does not match optimizer kind");
}

Predictions TrainedModel::predict_raw(const Matrix& raw) const {
  return predict(spec, params.values(), preprocessing.apply(raw));
}

double fitness(std::span<const double> params, const NetworkSpec& spec, const LabeledDataset& val_set) {
  return 1.0 - accuracy(spec, params, val_set);
}

Objective make_fitness_objective(const NetworkSpec& spec, const LabeledDataset& val_set) {
  return Objective{param_count(spec), [&spec, &val_set](std::span<const double> params) {
                     return fitness(params, spec, val_set);
                   }};
}

TrainedModel train(const TrainingTask& task, const IterationObserver& observer) {
  task.validate();
  const auto dim = param_count(task.spec);
  const auto objective = make_fitness_objective(task.spec, task.val_set);

  TrainedModel model;
  model.spec = task.spec;
  model.preprocessing = task.preprocessing;
  model.optimizer = task.optimizer;
  model.seed = task.seed;

  auto with_defaults = [&](auto config) {
    config.seed = task.seed;
    if (config.bounds.dimension() == 0) config.bounds = Bounds::uniform(dim, -5.0, 5.0);
    return config;
  };
  if (task.optimizer == OptimizerKind::Goa)
    model.run = goa_optimize(objective, with_defaults(std::get<GoaConfig>(task.optimizer_config)), observer);
  else
    model.run = pso_optimize(objective, with_defaults(std::get<PsoConfig>(task.optimizer_config)), observer);
  model.params = ParameterVector(model.run.best_position);
  return model;
}

}  // namespace wsnfd
