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

#include "wsnfd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "wsnfd/error.hpp"
#include "wsnfd/random.hpp"

namespace wsnfd {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool parse_double(const std::string& field, double& out) {
  if (field.empty()) return false;
  const char* begin = field.data();
  const char* end = begin + field.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

bool contains(const std::vector<std::string>& haystack, const std::string& needle) {
  return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

// Shuffled copy of the row indices belonging to `label`, deterministic in (seed, stream, label).
std::vector<std::size_t> shuffled_class_rows(const LabeledDataset& data, int label, std::uint64_t seed,
                                             std::uint64_t stream_tag) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < data.rows(); ++i)
    if (data.labels[i] == label) rows.push_back(i);
  auto rng = substream(seed, {stream_tag, static_cast<std::uint64_t>(label + 2)});
  std::shuffle(rows.begin(), rows.end(), rng);
  return rows;
}

}  // namespace

std::size_t LabeledDataset::count(int label) const noexcept {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> row_indices, std::string_view tag) const {
  LabeledDataset out;
  out.features.resize(static_cast<Eigen::Index>(row_indices.size()), features.cols());
  out.labels.reserve(row_indices.size());
  for (std::size_t r = 0; r < row_indices.size(); ++r) {
    const auto src = row_indices[r];
    if (src >= rows()) throw Error(ErrorKind::InvalidArgument, "subset row index out of range");
    out.features.row(static_cast<Eigen::Index>(r)) = features.row(static_cast<Eigen::Index>(src));
    out.labels.push_back(labels[src]);
  }
  out.feature_names = feature_names;
  out.source = tag.empty() ? source : source + "#" + std::string(tag);
  return out;
}

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size())
    throw Error(ErrorKind::InvalidArgument, "feature row count differs from label count");
  if (!feature_names.empty() && feature_names.size() != cols())
    throw Error(ErrorKind::InvalidArgument, "feature name count differs from column count");
  for (int y : labels)
    if (y != kNormal && y != kFaulty) throw Error(ErrorKind::InvalidArgument, "label is not +1 or -1");
  if (!features.allFinite()) throw Error(ErrorKind::InvalidArgument, "non-finite feature value");
}

std::vector<std::string> canonical_sensor_columns() {
  std::vector<std::string> names;
  for (const char* t : {"t0", "t1", "t2"})
    for (const char* s : {"T1", "T2", "H1", "H2"}) names.push_back(std::string(s) + "_" + t);
  return names;
}

LoadResult load_dataset(const std::filesystem::path& path, std::string_view label_column,
                        const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  // Skip leading comment lines written by save_dataset_csv.
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] != '#') break;
  }
  if (line.empty() || line[0] == '#') throw Error(ErrorKind::MalformedRow, "missing header row in " + path.string());

  const char delim = line.find('\t') != std::string::npos ? '\t' : ',';
  const auto header = split_fields(line, delim);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end())
    throw Error(ErrorKind::MalformedRow, "label column '" + std::string(label_column) + "' not in header");
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());

  LoadResult result;
  auto& data = result.data;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) data.feature_names.push_back(header[c]);

  std::vector<double> values;
  std::vector<double> row(data.feature_names.size());
  std::size_t data_row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_fields(line, delim);
    if (fields.size() != header.size())
      throw Error(ErrorKind::MalformedRow, "row " + std::to_string(data_row) + " (line " + std::to_string(line_no) +
                                               ") has " + std::to_string(fields.size()) + " fields, expected " +
                                               std::to_string(header.size()));
    ++data_row;

    const auto& label_text = fields[label_idx];
    int label = 0;
    if (contains(options.positive_aliases, label_text)) {
      label = kNormal;
    } else if (contains(options.negative_aliases, label_text)) {
      label = kFaulty;
    } else {
      throw Error(ErrorKind::UnknownLabelValue,
                  "'" + label_text + "' at line " + std::to_string(line_no) + " is not a known label");
    }

    bool ok = true;
    for (std::size_t c = 0, f = 0; c < fields.size(); ++c) {
      if (c == label_idx) continue;
      if (!parse_double(fields[c], row[f++])) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      ++result.rejected_rows;
      continue;
    }
    values.insert(values.end(), row.begin(), row.end());
    data.labels.push_back(label);
  }

  const auto n = static_cast<Eigen::Index>(data.labels.size());
  const auto p = static_cast<Eigen::Index>(data.feature_names.size());
  data.features = Eigen::Map<const Matrix>(values.data(), n, p);
  data.source = path.string();
  return result;
}

std::string dataset_csv_text(const LabeledDataset& data, std::string_view header_comment) {
  std::string out;
  if (!header_comment.empty()) {
    out += "# ";
    out += header_comment;
    out += '\n';
  }
  for (const auto& name : data.feature_names) out += name + ',';
  out += "label\n";
  char buf[32];
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, data.features(static_cast<Eigen::Index>(i),
                                                                          static_cast<Eigen::Index>(j)));
      out.append(buf, end);
      out += ',';
    }
    out += std::to_string(data.labels[i]);
    out += '\n';
  }
  return out;
}

void save_dataset_csv(const LabeledDataset& data, const std::filesystem::path& path,
                      std::string_view header_comment) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << dataset_csv_text(data, header_comment);
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

LabeledDataset synthesize_dataset(std::size_t n_samples, std::size_t n_features, double class_separation,
                                  std::uint64_t seed) {
  if (n_samples < 2) throw Error(ErrorKind::InvalidCount, "n_samples must be >= 2");
  if (n_features < 1) throw Error(ErrorKind::InvalidCount, "n_features must be >= 1");

  LabeledDataset data;
  data.features.resize(static_cast<Eigen::Index>(n_samples), static_cast<Eigen::Index>(n_features));
  data.labels.resize(n_samples);
  const double half_shift = 0.5 * class_separation / std::sqrt(static_cast<double>(n_features));
  auto rng = substream(seed, {stream::kSynthesis});
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int label = i % 2 == 0 ? kNormal : kFaulty;
    data.labels[i] = label;
    for (std::size_t j = 0; j < n_features; ++j)
      data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gauss(rng) + label * half_shift;
  }
  for (std::size_t j = 0; j < n_features; ++j) data.feature_names.push_back("x" + std::to_string(j));
  std::ostringstream src;
  src << "synthetic:" << seed << ";kind=blobs;n=" << n_samples << ";p=" << n_features
      << ";separation=" << class_separation;
  data.source = src.str();
  return data;
}

LabeledDataset synthesize_sensor_dataset(std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw Error(ErrorKind::InvalidCount, "n_samples must be >= 2");

  constexpr std::size_t kChannels = 4;
  constexpr std::size_t kStates = 3;
  constexpr double kScale[kChannels] = {2.5, 2.5, 5.0, 5.0};
  constexpr double kVapour[kChannels] = {9.0, 9.0, 20.0, 20.0};

  LabeledDataset data;
  data.features.resize(static_cast<Eigen::Index>(n_samples), kChannels * kStates);
  data.labels.resize(n_samples);
  auto rng = substream(seed, {stream::kSynthesis, 0x5e5});
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> excursion(0.6, 1.0);

  for (std::size_t i = 0; i < n_samples; ++i) {
    const int label = i % 2 == 0 ? kNormal : kFaulty;
    data.labels[i] = label;
    const double a = gauss(rng), b = gauss(rng), c = gauss(rng), d = gauss(rng);
    double base[kChannels] = {
        24.0 + 2.5 * a,
        24.0 + 2.5 * (0.8 * a + 0.6 * b),
        55.0 + 5.0 * c - 3.0 * a,
        55.0 + 5.0 * (0.8 * c + 0.6 * d) - 3.0 * a,
    };
    if (label == kFaulty) {
      const double e = excursion(rng);
      for (std::size_t ch = 0; ch < kChannels; ++ch) base[ch] += kVapour[ch] * e;
    }
    double drift[kChannels];
    for (std::size_t ch = 0; ch < kChannels; ++ch) drift[ch] = gauss(rng) * 0.03 * kScale[ch];
    for (std::size_t t = 0; t < kStates; ++t)
      for (std::size_t ch = 0; ch < kChannels; ++ch)
        data.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t * kChannels + ch)) =
            base[ch] + static_cast<double>(t) * drift[ch] + gauss(rng) * 0.02 * kScale[ch];
  }
  data.feature_names = canonical_sensor_columns();
  data.source = "synthetic:" + std::to_string(seed) + ";kind=sensor;n=" + std::to_string(n_samples) + ";p=12";
  return data;
}

Matrix MinMaxScaler::transform(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != mins.size())
    throw Error(ErrorKind::DimensionMismatch, "scaler expects " + std::to_string(mins.size()) + " columns");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double lo = mins[static_cast<std::size_t>(j)];
    const double span = maxs[static_cast<std::size_t>(j)] - lo;
    out.col(j) = (x.col(j).array() - lo) / span;
  }
  return out;
}

LabeledDataset MinMaxScaler::transform(const LabeledDataset& data) const {
  LabeledDataset out = data;
  out.features = transform(data.features);
  return out;
}

Matrix MinMaxScaler::inverse_transform(const Matrix& x) const {
  if (static_cast<std::size_t>(x.cols()) != mins.size())
    throw Error(ErrorKind::DimensionMismatch, "scaler expects " + std::to_string(mins.size()) + " columns");
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double lo = mins[static_cast<std::size_t>(j)];
    const double span = maxs[static_cast<std::size_t>(j)] - lo;
    out.col(j) = x.col(j).array() * span + lo;
  }
  return out;
}

NormalizedDataset min_max_normalize(const LabeledDataset& data) {
  data.validate();
  if (data.rows() == 0) throw Error(ErrorKind::TooFewSamples, "cannot normalize an empty dataset");
  MinMaxScaler scaler;
  for (Eigen::Index j = 0; j < data.features.cols(); ++j) {
    const double lo = data.features.col(j).minCoeff();
    const double hi = data.features.col(j).maxCoeff();
    if (!(hi > lo)) {
      const auto idx = static_cast<std::size_t>(j);
      const std::string name = idx < data.feature_names.size() ? data.feature_names[idx] : "#" + std::to_string(j);
      throw Error(ErrorKind::ConstantColumn, "column '" + name + "' is constant");
    }
    scaler.mins.push_back(lo);
    scaler.maxs.push_back(hi);
  }
  LabeledDataset out = scaler.transform(data);
  return {std::move(out), std::move(scaler)};
}

Partition stratified_split(const LabeledDataset& data, double train_fraction, double val_fraction_of_train,
                           std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0) || !(val_fraction_of_train > 0.0 && val_fraction_of_train < 1.0))
    throw Error(ErrorKind::InvalidArgument, "split fractions must lie in (0, 1)");
  Partition part;
  for (int label : {kNormal, kFaulty}) {
    const auto rows = shuffled_class_rows(data, label, seed, stream::kSplit);
    if (rows.size() < 2)
      throw Error(ErrorKind::TooFewSamples, "class " + std::to_string(label) + " has fewer than 2 samples");
    const auto n_side = static_cast<std::size_t>(std::lround(train_fraction * static_cast<double>(rows.size())));
    const auto n_val = static_cast<std::size_t>(std::lround(val_fraction_of_train * static_cast<double>(n_side)));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r < n_val)
        part.val_rows.push_back(rows[r]);
      else if (r < n_side)
        part.train_rows.push_back(rows[r]);
      else
        part.test_rows.push_back(rows[r]);
    }
  }
  for (auto* v : {&part.train_rows, &part.val_rows, &part.test_rows}) std::sort(v->begin(), v->end());
  part.train = data.subset(part.train_rows, "train");
  part.val = data.subset(part.val_rows, "val");
  part.test = data.subset(part.test_rows, "test");
  return part;
}

Holdout stratified_holdout(const LabeledDataset& data, double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw Error(ErrorKind::InvalidArgument, "holdout fraction must lie in (0, 1)");
  std::vector<std::size_t> rest_rows;
  std::vector<std::size_t> holdout_rows;
  for (int label : {kNormal, kFaulty}) {
    const auto rows = shuffled_class_rows(data, label, seed, stream::kSplit);
    if (rows.size() < 2)
      throw Error(ErrorKind::TooFewSamples, "class " + std::to_string(label) + " has fewer than 2 samples");
    const auto n_hold = static_cast<std::size_t>(std::lround(holdout_fraction * static_cast<double>(rows.size())));
    for (std::size_t r = 0; r < rows.size(); ++r) (r < n_hold ? holdout_rows : rest_rows).push_back(rows[r]);
  }
  std::sort(rest_rows.begin(), rest_rows.end());
  std::sort(holdout_rows.begin(), holdout_rows.end());
  return {data.subset(rest_rows, "rest"), data.subset(holdout_rows, "holdout")};
}

std::vector<Fold> stratified_kfold(const LabeledDataset& data, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be >= 2");
  std::vector<std::vector<std::size_t>> test_rows(k);
  std::size_t next_fold = 0;
  for (int label : {kNormal, kFaulty}) {
    const auto rows = shuffled_class_rows(data, label, seed, stream::kKFold);
    if (rows.size() < k)
      throw Error(ErrorKind::TooFewSamplesPerClass,
                  "class " + std::to_string(label) + " has " + std::to_string(rows.size()) + " < k samples");
    for (auto r : rows) {
      test_rows[next_fold].push_back(r);
      next_fold = (next_fold + 1) % k;
    }
  }

  std::vector<Fold> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    auto& fold = folds[f];
    fold.test_rows = std::move(test_rows[f]);
    std::sort(fold.test_rows.begin(), fold.test_rows.end());
    std::vector<bool> in_test(data.rows(), false);
    for (auto r : fold.test_rows) in_test[r] = true;
    for (std::size_t r = 0; r < data.rows(); ++r)
      if (!in_test[r]) fold.train_rows.push_back(r);
    fold.train = data.subset(fold.train_rows, "fold" + std::to_string(f) + "-train");
    fold.test = data.subset(fold.test_rows, "fold" + std::to_string(f) + "-test");
  }
  return folds;
}

std::string_view to_string(FaultKind kind) noexcept {
  switch (kind) {
    case FaultKind::Offset: return "offset";
    case FaultKind::Gain: return "gain";
    case FaultKind::StuckAt: return "stuck_at";
    case FaultKind::OutOfRange: return "out_of_range";
  }
  return "unknown";
}

FaultKind parse_fault_kind(std::string_view name) {
  for (auto kind : {FaultKind::Offset, FaultKind::Gain, FaultKind::StuckAt, FaultKind::OutOfRange})
    if (name == to_string(kind)) return kind;
  throw Error(ErrorKind::InvalidArgument, "unknown fault kind '" + std::string(name) + "'");
}

FaultSpec FaultSpec::defaults(FaultKind kind, std::vector<std::size_t> columns, std::uint64_t seed) {
  FaultSpec spec;
  spec.kind = kind;
  spec.target_columns = std::move(columns);
  spec.seed = seed;
  switch (kind) {
    case FaultKind::Offset: spec.magnitude = 0.2; break;
    case FaultKind::Gain: spec.magnitude = 1.5; break;
    case FaultKind::StuckAt: spec.magnitude = 0.0; break;
    case FaultKind::OutOfRange: spec.magnitude = 0.5; break;
  }
  return spec;
}

FaultResult inject_fault(const LabeledDataset& data, const FaultSpec& spec) {
  if (!(spec.affected_fraction > 0.0 && spec.affected_fraction <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "affected_fraction must lie in (0, 1]");
  if (spec.kind == FaultKind::Gain && !(spec.magnitude > 0.0))
    throw Error(ErrorKind::InvalidArgument, "gain magnitude must be positive");
  for (auto c : spec.target_columns)
    if (c >= data.cols())
      throw Error(ErrorKind::ColumnOutOfRange,
                  "column " + std::to_string(c) + " >= " + std::to_string(data.cols()) + " columns");

  FaultResult result{data, {}};
  const std::size_t n = data.rows();
  if (n == 0) return result;
  const auto n_affected = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(spec.affected_fraction * static_cast<double>(n) - 1e-9)));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = substream(spec.seed, {stream::kFault, static_cast<std::uint64_t>(spec.kind)});
  std::shuffle(order.begin(), order.end(), rng);
  result.affected_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_affected));
  std::sort(result.affected_rows.begin(), result.affected_rows.end());

  auto& x = result.data.features;
  for (auto c : spec.target_columns) {
    const auto col = static_cast<Eigen::Index>(c);
    const double stuck = x(static_cast<Eigen::Index>(result.affected_rows.front()), col);
    for (auto r : result.affected_rows) {
      double& v = x(static_cast<Eigen::Index>(r), col);
      switch (spec.kind) {
        case FaultKind::Offset: v += spec.magnitude; break;
        case FaultKind::Gain: v *= spec.magnitude; break;
        case FaultKind::StuckAt: v = stuck; break;
        case FaultKind::OutOfRange: v = 1.0 + spec.magnitude; break;
      }
    }
  }
  for (auto r : result.affected_rows) result.data.labels[r] = kFaulty;
  result.data.source += "#fault=" + std::string(to_string(spec.kind));
  return result;
}

}  // namespace wsnfd
