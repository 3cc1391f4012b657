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

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "wsnfd/commands.hpp"

namespace {

struct Flags {
  std::string config_file;
  std::string out;
  std::string model;
  std::string input;
  bool all_rows = false;
  wsnfd::PipelineConfig values;
  std::vector<std::string> faults;
  std::string optimizer;
  std::vector<std::string> compare;
  std::vector<CLI::Option*> set;
};

wsnfd::FaultSpec parse_fault(const std::string& text) {
  // kind[:magnitude[:fraction]]
  const auto first = text.find(':');
  auto spec = wsnfd::FaultSpec::defaults(wsnfd::parse_fault_kind(text.substr(0, first)), {}, 0);
  if (first == std::string::npos) return spec;
  const auto second = text.find(':', first + 1);
  spec.magnitude = std::stod(text.substr(first + 1, second - first - 1));
  if (second != std::string::npos) spec.affected_fraction = std::stod(text.substr(second + 1));
  return spec;
}

void add_options(CLI::App* cmd, Flags& f) {
  auto& v = f.values;
  cmd->add_option("--config", f.config_file, "Config JSON or any artifact written by a previous run");
  cmd->add_option("--out", f.out, "Output directory (default: $WSNFD_OUTPUT_DIR or ./wsnfd-out)");
  auto track = [&](CLI::Option* o) { f.set.push_back(o); };
  track(cmd->add_option("--data", v.data.path, "Comma- or tab-delimited dataset with a header row"));
  track(cmd->add_option("--label-column", v.data.label_column, "Name of the label column"));
  track(cmd->add_option("--synthetic", v.data.synthetic, "Generate data instead of loading: sensor or blobs")
            ->check(CLI::IsMember({"sensor", "blobs"})));
  track(cmd->add_option("--samples", v.data.samples, "Synthetic sample count"));
  track(cmd->add_option("--features", v.data.features, "Feature count for blobs"));
  track(cmd->add_option("--separation", v.data.separation, "Class separation for blobs"));
  track(cmd->add_option("--data-seed", v.data.seed, "Seed for synthetic data"));
  track(cmd->add_option("--threshold", v.pca_threshold, "Cumulative variance kept by PCA"));
  track(cmd->add_option("--hidden", v.hidden_layers, "Hidden layer widths")->delimiter(','));
  track(cmd->add_option("--optimizer", f.optimizer, "goa or pso")->check(CLI::IsMember({"goa", "pso"})));
  track(cmd->add_option("--population", v.goa.population, "Swarm size"));
  track(cmd->add_option("--iterations", v.goa.iterations, "Optimizer iterations"));
  track(cmd->add_option("--weight-bound", v.weight_bound, "Weights are searched in [-b, b]"));
  track(cmd->add_option("--train-fraction", v.train_fraction, "Fraction of each class on the train side"));
  track(cmd->add_option("--val-fraction", v.val_fraction_of_train, "Fraction of the train side used for validation"));
  track(cmd->add_option("--seeds", v.seeds, "Seeds, comma separated")->delimiter(','));
  track(cmd->add_flag("--paper-faithful", v.paper_faithful, "Fit scaler and PCA on the full dataset"));
  track(cmd->add_option("--folds", v.folds, "Cross-validation folds"));
  track(cmd->add_option("--repeats", v.repeats, "Cross-validation repeats"));
  track(cmd->add_option("--compare", f.compare, "Optimizers to compare")->delimiter(','));
  track(cmd->add_option("--fault", f.faults, "kind[:magnitude[:fraction]], repeatable"));
  track(cmd->add_option("--threads", v.threads, "Worker threads for fitness evaluation (0 = all cores)"));
}

const std::map<std::string, std::string> kDescriptions{
    {"prepare", "Load, normalize, split and project; write the partitions"},
    {"pca", "Fit the scaler and PCA; write the eigenvalue curve"},
    {"train", "Train the network and evaluate it on every split"},
    {"eval", "Score a saved model"},
    {"crossval", "Repeated stratified k-fold cross-validation"},
    {"inject", "Accuracy under injected sensor faults"},
    {"compare", "Train each optimizer on identical data and seeds"},
    {"report", "Summarize the artifacts of earlier runs as markdown"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor fault detection: PCA + swarm-trained neural network"};
  app.require_subcommand(1);
  Flags f;
  for (const auto& name : wsnfd::command_names()) {
    auto* cmd = app.add_subcommand(name, kDescriptions.at(name));
    add_options(cmd, f);
    if (name == "eval" || name == "inject")
      cmd->add_option("--model", f.model, "model.json from a train run")->check(CLI::ExistingFile);
    if (name == "eval") cmd->add_flag("--all-rows", f.all_rows, "Score every row instead of the test partition");
    if (name == "report") cmd->add_option("--input", f.input, "Directory of artifacts (default: --out)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  wsnfd::CommandRequest req;
  req.command = app.get_subcommands().front()->get_name();
  auto& config = req.config;
  auto is_set = [&](const char* name) {
    for (auto* o : f.set)
      if (o->get_name() == name && o->count() > 0) return true;
    return false;
  };
  try {
    // Defaults, then flags, then the config file.
    config = f.values;
    config.goa = wsnfd::GoaConfig{};
    config.pso = wsnfd::PsoConfig{};
    if (is_set("--population")) config.goa.population = config.pso.population = f.values.goa.population;
    if (is_set("--iterations")) config.goa.iterations = config.pso.iterations = f.values.goa.iterations;
    if (is_set("--optimizer")) config.optimizer = wsnfd::parse_optimizer_kind(f.optimizer);
    if (is_set("--compare")) {
      config.compare.clear();
      for (const auto& name : f.compare) config.compare.push_back(wsnfd::parse_optimizer_kind(name));
    }
    for (const auto& text : f.faults) config.faults.push_back(parse_fault(text));
    if (!f.config_file.empty()) wsnfd::apply_config_json(wsnfd::config_json_from_file(f.config_file), config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  if (!f.out.empty()) req.output_dir = f.out;
  else if (const char* env = std::getenv("WSNFD_OUTPUT_DIR"); env && *env) req.output_dir = env;
  else req.output_dir = "wsnfd-out";
  req.model_path = f.model;
  req.input_dir = f.input;
  req.all_rows = f.all_rows;

  const auto outcome = wsnfd::run_command(req, std::cerr);
  if (outcome.exit_code != 0) std::cout << outcome.error.dump() << "\n";
  return outcome.exit_code;
}
