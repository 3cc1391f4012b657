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
#include <iosfwd>
#include <string>
#include <vector>

#include "wsnfd/pipeline.hpp"

namespace wsnfd {

/// The subcommands understood by run_command.
const std::vector<std::string>& command_names();

struct CommandRequest {
  std::string command;
  PipelineConfig config;
  std::filesystem::path output_dir = ".";
  std::filesystem::path model_path;  // eval, inject: previously trained model.json
  std::filesystem::path input_dir;   // report: directory of artifacts to summarize
  bool all_rows = false;             // eval: score every row instead of the test partition
};

struct CommandOutcome {
  int exit_code = 0;
  std::vector<std::filesystem::path> written;  // in write order
  Json error;                                  // null on success
};

/// Runs one command, writing its artifacts under request.output_dir.
/// On failure a `.failed` marker holding the error record is written there;
/// a stale marker from an earlier run is removed first.
CommandOutcome run_command(const CommandRequest& request, std::ostream& log);

/// "# wsnfd command=<c> schema_version=<v> config=<compact json>"
std::string csv_provenance_line(const std::string& command, const PipelineConfig& config);

/// Adds schema_version, command and config to a JSON artifact body.
Json with_provenance(Json body, const std::string& command, const PipelineConfig& config);

}  // namespace wsnfd
