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

#include <filesystem>
#include <nlohmann/json.hpp>

#include "wsnfd/dataset.hpp"
#include "wsnfd/metrics.hpp"
#include "wsnfd/network.hpp"
#include "wsnfd/pca.hpp"
#include "wsnfd/swarm.hpp"
#include "wsnfd/trainer.hpp"

namespace wsnfd {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

void to_json(Json& j, const MinMaxScaler& s);
void from_json(const Json& j, MinMaxScaler& s);

/// Eigenvectors are stored row-major as an array of rows.
void to_json(Json& j, const PcaModel& m);
void from_json(const Json& j, PcaModel& m);

void to_json(Json& j, const NetworkSpec& s);
void from_json(const Json& j, NetworkSpec& s);

// Optimizer configs omit bounds and threads: bounds are derived from the
// weight bound at training time and threads never change results.
void to_json(Json& j, const GoaConfig& c);
void from_json(const Json& j, GoaConfig& c);
void to_json(Json& j, const PsoConfig& c);
void from_json(const Json& j, PsoConfig& c);

void to_json(Json& j, const FaultSpec& f);
void from_json(const Json& j, FaultSpec& f);

void to_json(Json& j, const ConfusionCounts& c);
void to_json(Json& j, const MetricSet& m);
void to_json(Json& j, const SummaryStats& s);
void to_json(Json& j, const TTestResult& t);

/// Self-describing model file: layer sizes, flat parameters, class order and
/// the embedded preprocessing (scaler + PCA) needed for raw-feature inference.
Json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const Json& j);

Json read_json_file(const std::filesystem::path& path);

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Canonical text form used for every JSON artifact (sorted keys, 2-space indent, trailing newline).
std::string dump_json(const Json& j);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace wsnfd
