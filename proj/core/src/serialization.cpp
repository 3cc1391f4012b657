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

#include "wsnfd/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wsnfd/error.hpp"

namespace wsnfd {
namespace {

template <typename T>
void read_if_present(const Json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

}  // namespace

void to_json(Json& j, const MinMaxScaler& s) { j = Json{{"mins", s.mins}, {"maxs", s.maxs}}; }

void from_json(const Json& j, MinMaxScaler& s) {
  j.at("mins").get_to(s.mins);
  j.at("maxs").get_to(s.maxs);
  if (s.mins.size() != s.maxs.size()) throw Error(ErrorKind::SchemaMismatch, "scaler mins/maxs differ in length");
  for (std::size_t i = 0; i < s.mins.size(); ++i)
    if (!(s.mins[i] <= s.maxs[i])) throw Error(ErrorKind::SchemaMismatch, "scaler min exceeds max");
}

void to_json(Json& j, const PcaModel& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.eigenvectors.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(m.eigenvectors.cols()));
    for (Eigen::Index c = 0; c < m.eigenvectors.cols(); ++c) row[static_cast<std::size_t>(c)] = m.eigenvectors(r, c);
    rows.push_back(row);
  }
  j = Json{{"means", m.means},
           {"stds", m.stds},
           {"eigenvalues", m.eigenvalues},
           {"eigenvectors", rows},
           {"retained", m.retained}};
}

void from_json(const Json& j, PcaModel& m) {
  j.at("means").get_to(m.means);
  j.at("stds").get_to(m.stds);
  j.at("eigenvalues").get_to(m.eigenvalues);
  j.at("retained").get_to(m.retained);
  const auto& rows = j.at("eigenvectors");
  const auto p = static_cast<Eigen::Index>(m.means.size());
  if (m.stds.size() != m.means.size() || m.eigenvalues.size() != m.means.size() ||
      rows.size() != m.means.size())
    throw Error(ErrorKind::SchemaMismatch, "PCA model arrays disagree in length");
  if (m.retained < 1 || m.retained > m.means.size())
    throw Error(ErrorKind::SchemaMismatch, "PCA retained count out of range");
  m.eigenvectors.resize(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    const auto row = rows.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
    if (row.size() != m.means.size()) throw Error(ErrorKind::SchemaMismatch, "eigenvector row has wrong length");
    for (Eigen::Index c = 0; c < p; ++c) m.eigenvectors(r, c) = row[static_cast<std::size_t>(c)];
  }
}

void to_json(Json& j, const NetworkSpec& s) { j = s.layer_sizes; }
void from_json(const Json& j, NetworkSpec& s) { j.get_to(s.layer_sizes); }

void to_json(Json& j, const GoaConfig& c) {
  j = Json{{"population", c.population}, {"iterations", c.iterations}, {"c_max", c.c_max}, {"c_min", c.c_min},
           {"f", c.f},
           {"l", c.l},
           {"distance_clip", {c.clip_low, c.clip_high}}};
}

void from_json(const Json& j, GoaConfig& c) {
  read_if_present(j, "population", c.population);
  read_if_present(j, "iterations", c.iterations);
  read_if_present(j, "c_max", c.c_max);
  read_if_present(j, "c_min", c.c_min);
  read_if_present(j, "f", c.f);
  read_if_present(j, "l", c.l);
  if (j.contains("distance_clip")) {
    const auto clip = j.at("distance_clip").get<std::vector<double>>();
    if (clip.size() != 2) throw Error(ErrorKind::SchemaMismatch, "distance_clip must be [low, high]");
    c.clip_low = clip[0];
    c.clip_high = clip[1];
  }
}

void to_json(Json& j, const PsoConfig& c) {
  j = Json{{"population", c.population}, {"iterations", c.iterations}, {"inertia", c.inertia},
           {"cognitive", c.cognitive},   {"social", c.social},         {"velocity_clamp", c.velocity_clamp}};
}

void from_json(const Json& j, PsoConfig& c) {
  read_if_present(j, "population", c.population);
  read_if_present(j, "iterations", c.iterations);
  read_if_present(j, "inertia", c.inertia);
  read_if_present(j, "cognitive", c.cognitive);
  read_if_present(j, "social", c.social);
  read_if_present(j, "velocity_clamp", c.velocity_clamp);
}

void to_json(Json& j, const FaultSpec& f) {
  j = Json{{"kind", to_string(f.kind)},
           {"magnitude", f.magnitude},
           {"target_columns", f.target_columns},
           {"affected_fraction", f.affected_fraction},
           {"seed", f.seed}};
}

void from_json(const Json& j, FaultSpec& f) {
  const auto kind = parse_fault_kind(j.at("kind").get<std::string>());
  f = FaultSpec::defaults(kind, {}, 0);
  read_if_present(j, "magnitude", f.magnitude);
  read_if_present(j, "target_columns", f.target_columns);
  read_if_present(j, "affected_fraction", f.affected_fraction);
  read_if_present(j, "seed", f.seed);
}

void to_json(Json& j, const ConfusionCounts& c) { j = Json{{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}}; }

void to_json(Json& j, const MetricSet& m) {
  j = Json{{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  if (m.precision_degenerate || m.recall_degenerate || m.f1_degenerate)
    j["degenerate"] = Json{{"precision", m.precision_degenerate}, {"recall", m.recall_degenerate}, {"f1", m.f1_degenerate}};
}

void to_json(Json& j, const SummaryStats& s) {
  j = Json{{"mean", s.mean}, {"std", s.std}, {"ci", {s.ci_low, s.ci_high}}};
}

void to_json(Json& j, const TTestResult& t) { j = Json{{"t", t.t}, {"p", t.p}, {"df", t.df}}; }

Json model_to_json(const TrainedModel& model) {
  return Json{{"schema_version", kSchemaVersion},
              {"kind", "wsnfd.model"},
              {"layer_sizes", model.spec},
              {"params", model.params.vector()},
              {"class_order", {"faulty", "normal"}},
              {"optimizer", to_string(model.optimizer)},
              {"seed", model.seed},
              {"scaler_ref", "scaler.json"},
              {"pca_model_ref", "pca.json"},
              {"scaler", model.preprocessing.scaler},
              {"pca", model.preprocessing.pca},
              {"best_cost", model.run.best_cost},
              {"evaluations", model.run.evaluations}};
}

TrainedModel model_from_json(const Json& j) {
  if (j.value("schema_version", 0) != kSchemaVersion)
    throw Error(ErrorKind::SchemaMismatch, "unsupported model schema version");
  if (j.at("class_order") != Json{"faulty", "normal"})
    throw Error(ErrorKind::SchemaMismatch, "class_order must be [\"faulty\", \"normal\"]");
  TrainedModel model;
  j.at("layer_sizes").get_to(model.spec);
  model.spec.validate();
  model.params = ParameterVector(j.at("params").get<std::vector<double>>());
  if (model.params.size() != param_count(model.spec))
    throw Error(ErrorKind::SchemaMismatch, "parameter count does not match layer sizes");
  model.optimizer = parse_optimizer_kind(j.at("optimizer").get<std::string>());
  j.at("seed").get_to(model.seed);
  j.at("scaler").get_to(model.preprocessing.scaler);
  j.at("pca").get_to(model.preprocessing.pca);
  model.run.best_cost = j.value("best_cost", 0.0);
  model.run.evaluations = j.value("evaluations", std::size_t{0});
  model.run.best_position = model.params.vector();
  return model;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::SchemaMismatch, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error(ErrorKind::Io, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace wsnfd
