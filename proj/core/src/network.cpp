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

#include "wsnfd/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wsnfd/error.hpp"

namespace wsnfd {
namespace {

constexpr double kProbFloor = std::numeric_limits<double>::min();
const double kProbCeil = std::nextafter(1.0, 0.0);

double clamp_open_unit(double p) noexcept { return std::clamp(p, kProbFloor, kProbCeil); }

constexpr std::size_t kMaxWidth = 256;

// Forward pass into caller-provided scratch; returns the output width.
std::size_t forward_into(const NetworkSpec& spec, const double* params, const double* x, double* out) {
  double buf_a[kMaxWidth];
  double buf_b[kMaxWidth];
  const double* in = x;
  double* cur = buf_a;
  double* next = buf_b;
  const auto& sizes = spec.layer_sizes;
  const std::size_t n_layers = sizes.size() - 1;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const std::size_t fan_in = sizes[l];
    const std::size_t fan_out = sizes[l + 1];
    const double* w = params;
    const double* b = params + fan_in * fan_out;
    const bool is_output = l + 1 == n_layers;
    double* dst = is_output ? out : cur;
    for (std::size_t o = 0; o < fan_out; ++o) {
      double acc = b[o];
      const double* row = w + o * fan_in;
      for (std::size_t i = 0; i < fan_in; ++i) acc += row[i] * in[i];
      dst[o] = is_output ? acc : sigmoid(acc);
    }
    params = b + fan_out;
    in = dst;
    std::swap(cur, next);
  }
  const std::size_t k = sizes.back();
  const double mx = *std::max_element(out, out + k);
  double total = 0.0;
  for (std::size_t o = 0; o < k; ++o) {
    out[o] = std::exp(out[o] - mx);
    total += out[o];
  }
  for (std::size_t o = 0; o < k; ++o) out[o] = clamp_open_unit(out[o] / total);
  return k;
}

void check_inputs(const NetworkSpec& spec, std::span<const double> params, std::size_t input_width) {
  if (spec.layer_sizes.size() < 2) throw Error(ErrorKind::InvalidArgument, "network needs at least 2 layers");
  for (auto s : spec.layer_sizes)
    if (s < 1 || s > kMaxWidth) throw Error(ErrorKind::InvalidArgument, "layer width must lie in [1, 256]");
  if (params.size() != param_count(spec))
    throw Error(ErrorKind::DimensionMismatch, "parameter vector has " + std::to_string(params.size()) +
                                                  " entries, network needs " + std::to_string(param_count(spec)));
  if (input_width != spec.input_size())
    throw Error(ErrorKind::DimensionMismatch, "input has " + std::to_string(input_width) + " features, network expects " +
                                                  std::to_string(spec.input_size()));
}

void check_binary(const NetworkSpec& spec) {
  if (spec.output_size() != 2) throw Error(ErrorKind::InvalidArgument, "prediction needs a 2-unit output layer");
}

}  // namespace

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 2) throw Error(ErrorKind::InvalidArgument, "network needs at least 2 layers");
  for (auto s : layer_sizes)
    if (s < 1 || s > kMaxWidth) throw Error(ErrorKind::InvalidArgument, "layer width must lie in [1, 256]");
  if (output_size() != 2) throw Error(ErrorKind::InvalidArgument, "output layer must have 2 units (faulty, normal)");
}

std::size_t param_count(const NetworkSpec& spec) {
  std::size_t total = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l)
    total += spec.layer_sizes[l] * spec.layer_sizes[l + 1] + spec.layer_sizes[l + 1];
  return total;
}

std::vector<DenseLayer> unflatten(const NetworkSpec& spec, std::span<const double> params) {
  if (params.size() != param_count(spec)) throw Error(ErrorKind::DimensionMismatch, "parameter count mismatch");
  std::vector<DenseLayer> layers;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < spec.layer_sizes.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(spec.layer_sizes[l]);
    const auto fan_out = static_cast<Eigen::Index>(spec.layer_sizes[l + 1]);
    DenseLayer layer;
    layer.weights = Eigen::Map<const Matrix>(params.data() + offset, fan_out, fan_in);
    offset += static_cast<std::size_t>(fan_in * fan_out);
    layer.biases = Eigen::Map<const Vector>(params.data() + offset, fan_out);
    offset += static_cast<std::size_t>(fan_out);
    layers.push_back(std::move(layer));
  }
  return layers;
}

ParameterVector flatten(const std::vector<DenseLayer>& layers) {
  std::vector<double> values;
  for (const auto& layer : layers) {
    for (Eigen::Index o = 0; o < layer.weights.rows(); ++o)
      for (Eigen::Index i = 0; i < layer.weights.cols(); ++i) values.push_back(layer.weights(o, i));
    values.insert(values.end(), layer.biases.data(), layer.biases.data() + layer.biases.size());
  }
  return ParameterVector(std::move(values));
}

double sigmoid(double x) noexcept {
  if (x >= 0.0) return clamp_open_unit(1.0 / (1.0 + std::exp(-x)));
  const double e = std::exp(x);
  return clamp_open_unit(e / (1.0 + e));
}

ClassProbabilities softmax(std::span<const double> logits) {
  ClassProbabilities p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double mx = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (auto& v : p) {
    v = std::exp(v - mx);
    total += v;
  }
  for (auto& v : p) v = clamp_open_unit(v / total);
  return p;
}

ClassProbabilities forward(const NetworkSpec& spec, std::span<const double> params, std::span<const double> x) {
  check_inputs(spec, params, x.size());
  ClassProbabilities out(spec.output_size());
  forward_into(spec, params.data(), x.data(), out.data());
  return out;
}

Predictions predict(const NetworkSpec& spec, std::span<const double> params, const Matrix& x) {
  check_inputs(spec, params, static_cast<std::size_t>(x.cols()));
  check_binary(spec);
  Predictions out;
  out.labels.resize(static_cast<std::size_t>(x.rows()));
  out.scores.resize(static_cast<std::size_t>(x.rows()));
  double probs[kMaxWidth];
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    forward_into(spec, params.data(), x.row(r).data(), probs);
    const auto i = static_cast<std::size_t>(r);
    out.scores[i] = probs[kNormalIndex];
    out.labels[i] = probs[kNormalIndex] >= probs[kFaultyIndex] ? kNormal : kFaulty;
  }
  return out;
}

double accuracy(const NetworkSpec& spec, std::span<const double> params, const LabeledDataset& data) {
  check_inputs(spec, params, data.cols());
  check_binary(spec);
  if (data.rows() == 0) throw Error(ErrorKind::EmptyInput, "accuracy on an empty dataset");
  double probs[kMaxWidth];
  std::size_t correct = 0;
  for (Eigen::Index r = 0; r < data.features.rows(); ++r) {
    forward_into(spec, params.data(), data.features.row(r).data(), probs);
    const int label = probs[kNormalIndex] >= probs[kFaultyIndex] ? kNormal : kFaulty;
    correct += label == data.labels[static_cast<std::size_t>(r)] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.rows());
}

}  // namespace wsnfd
