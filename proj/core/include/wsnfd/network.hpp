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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "wsnfd/dataset.hpp"

namespace wsnfd {

/// Layer widths, input first and output last. The output width is the class count.
struct NetworkSpec {
  std::vector<std::size_t> layer_sizes{4, 8, 7, 6, 5, 4, 3, 2};

  std::size_t input_size() const { return layer_sizes.front(); }
  std::size_t output_size() const { return layer_sizes.back(); }
  void validate() const;

  bool operator==(const NetworkSpec&) const = default;
};

/// Sum over consecutive layer pairs of fan_in * fan_out weights plus fan_out biases.
std::size_t param_count(const NetworkSpec& spec);

/// All weights and biases in one flat vector. Layout, layer by layer: the
/// fan_out x fan_in weight matrix row-major, then the fan_out biases.
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::vector<double> values) : values_(std::move(values)) {}

  static ParameterVector zeros(const NetworkSpec& spec) { return ParameterVector(std::vector<double>(param_count(spec))); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& vector() const noexcept { return values_; }

  bool operator==(const ParameterVector&) const = default;

 private:
  std::vector<double> values_;
};

struct DenseLayer {
  Matrix weights;  // fan_out x fan_in
  Vector biases;
};

std::vector<DenseLayer> unflatten(const NetworkSpec& spec, std::span<const double> params);
ParameterVector flatten(const std::vector<DenseLayer>& layers);

// Class index order of every probability vector.
inline constexpr std::size_t kFaultyIndex = 0;
inline constexpr std::size_t kNormalIndex = 1;

using ClassProbabilities = std::vector<double>;

/// 1 / (1 + e^-x) via the non-overflowing branch, kept strictly inside (0, 1).
double sigmoid(double x) noexcept;

/// Max-subtracted softmax, each entry kept strictly inside (0, 1).
ClassProbabilities softmax(std::span<const double> logits);

/// Affine + sigmoid through every hidden layer, affine + softmax at the output.
ClassProbabilities forward(const NetworkSpec& spec, std::span<const double> params, std::span<const double> x);

struct Predictions {
  std::vector<int> labels;     // +1 normal, -1 faulty; ties go to +1
  std::vector<double> scores;  // P(normal)
};

Predictions predict(const NetworkSpec& spec, std::span<const double> params, const Matrix& x);

/// Fraction of rows whose predicted label equals the true label.
double accuracy(const NetworkSpec& spec, std::span<const double> params, const LabeledDataset& data);

}  // namespace wsnfd
