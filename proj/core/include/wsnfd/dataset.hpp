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

#include <Eigen/Core>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wsnfd {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline constexpr int kNormal = +1;
inline constexpr int kFaulty = -1;

/// Feature matrix (rows are samples) with +1 (normal) / -1 (faulty) labels.
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::string source;

  std::size_t rows() const noexcept { return labels.size(); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(features.cols()); }
  std::size_t count(int label) const noexcept;

  /// Rows in the given order; provenance gets a suffix describing the selection.
  LabeledDataset subset(std::span<const std::size_t> row_indices, std::string_view tag = {}) const;

  /// Throws InvalidArgument when any structural invariant is broken.
  void validate() const;

  bool operator==(const LabeledDataset&) const = default;
};

/// The canonical column order of the UNC multi-hop processed set.
std::vector<std::string> canonical_sensor_columns();

struct LoadOptions {
  std::vector<std::string> positive_aliases{"1", "+1", "1.0", "+1.0", "normal"};
  std::vector<std::string> negative_aliases{"-1", "-1.0", "faulty", "fault"};
};

struct LoadResult {
  LabeledDataset data;
  std::size_t rejected_rows = 0;  // rows with a missing or non-numeric feature value
};

/// Reads comma- or tab-delimited text with a header row. Every column other
/// than `label_column` becomes a feature, in file order.
LoadResult load_dataset(const std::filesystem::path& path, std::string_view label_column,
                        const LoadOptions& options = {});

/// Comma-separated text with a trailing `label` column, preceded by "# <comment>" when given.
std::string dataset_csv_text(const LabeledDataset& data, std::string_view header_comment = {});

/// Writes the dataset as comma-separated text with a trailing `label` column.
void save_dataset_csv(const LabeledDataset& data, const std::filesystem::path& path,
                      std::string_view header_comment = {});

/// Balanced two-class Gaussian blobs (unit variance) whose means are
/// `class_separation` apart along the all-ones diagonal.
LabeledDataset synthesize_dataset(std::size_t n_samples, std::size_t n_features, double class_separation,
                                  std::uint64_t seed);

/// A stand-in with the 12-column T1,T2,H1,H2 x t0,t1,t2 schema: four latent
/// sensor channels observed at three time states, faulty rows carrying a warm
/// vapour excursion on temperature and humidity.
LabeledDataset synthesize_sensor_dataset(std::size_t n_samples, std::uint64_t seed);

struct MinMaxScaler {
  std::vector<double> mins;
  std::vector<double> maxs;

  Matrix transform(const Matrix& x) const;
  LabeledDataset transform(const LabeledDataset& data) const;
  Matrix inverse_transform(const Matrix& x) const;

  bool operator==(const MinMaxScaler&) const = default;
};

struct NormalizedDataset {
  LabeledDataset data;
  MinMaxScaler scaler;
};

/// x' = (x - min) / (max - min) per column; constant columns are rejected.
NormalizedDataset min_max_normalize(const LabeledDataset& data);

struct Partition {
  LabeledDataset train;
  LabeledDataset val;
  LabeledDataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> val_rows;
  std::vector<std::size_t> test_rows;
};

/// Per class: round(train_fraction * n_c) rows go to the train side, of which
/// round(val_fraction_of_train * train_c) are carved out for validation.
Partition stratified_split(const LabeledDataset& data, double train_fraction, double val_fraction_of_train,
                           std::uint64_t seed);

struct Holdout {
  LabeledDataset rest;
  LabeledDataset holdout;
};

/// Per class, round(holdout_fraction * n_c) rows are held out.
Holdout stratified_holdout(const LabeledDataset& data, double holdout_fraction, std::uint64_t seed);

struct Fold {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<std::size_t> train_rows;
  std::vector<std::size_t> test_rows;
};

/// Classes are shuffled and dealt round-robin into k folds; the deal for each
/// class resumes where the previous class stopped, so fold sizes differ by at most one.
std::vector<Fold> stratified_kfold(const LabeledDataset& data, std::size_t k, std::uint64_t seed);

enum class FaultKind { Offset, Gain, StuckAt, OutOfRange };

std::string_view to_string(FaultKind kind) noexcept;
FaultKind parse_fault_kind(std::string_view name);

struct FaultSpec {
  FaultKind kind = FaultKind::Offset;
  double magnitude = 0.2;
  std::vector<std::size_t> target_columns;
  double affected_fraction = 0.05;
  std::uint64_t seed = 0;

  /// Default magnitude per kind: offset 0.2, gain 1.5, out-of-range 0.5.
  static FaultSpec defaults(FaultKind kind, std::vector<std::size_t> columns, std::uint64_t seed);
};

struct FaultResult {
  LabeledDataset data;
  std::vector<std::size_t> affected_rows;  // ascending
};

/// Corrupts ceil(affected_fraction * n) seeded-random rows in the target
/// columns and relabels them faulty.
FaultResult inject_fault(const LabeledDataset& data, const FaultSpec& spec);

}  // namespace wsnfd
