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

#include <benchmark/benchmark.h>

#include <random>

#include "wsnfd/metrics.hpp"
#include "wsnfd/network.hpp"
#include "wsnfd/pca.hpp"
#include "wsnfd/swarm.hpp"
#include "wsnfd/trainer.hpp"

using namespace wsnfd;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double scale) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void BM_Forward(benchmark::State& state) {
  const NetworkSpec spec;
  const auto params = random_vector(param_count(spec), 1, 5.0);
  const auto x = random_vector(4, 2, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(forward(spec, params, x));
}
BENCHMARK(BM_Forward);

void BM_PredictBatch(benchmark::State& state) {
  const NetworkSpec spec;
  const auto params = random_vector(param_count(spec), 3, 5.0);
  const auto rows = static_cast<Eigen::Index>(state.range(0));
  Matrix x(rows, 4);
  const auto values = random_vector(static_cast<std::size_t>(x.size()), 4, 2.0);
  std::copy(values.begin(), values.end(), x.data());
  for (auto _ : state) benchmark::DoNotOptimize(predict(spec, params, x));
  state.SetItemsProcessed(state.iterations() * rows);
}
BENCHMARK(BM_PredictBatch)->Arg(469)->Arg(2812);

void BM_GoaStep(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const Objective sphere{dim, [](std::span<const double> v) {
                           double s = 0.0;
                           for (double x : v) s += x * x;
                           return s;
                         }};
  GoaConfig config;
  config.bounds = Bounds::uniform(dim, -5.0, 5.0);
  SwarmState s;
  s.positions = initialize_population(config.bounds, config.population, 5);
  s.costs = evaluate_population(sphere, s.positions, 1);
  const auto best = std::min_element(s.costs.begin(), s.costs.end()) - s.costs.begin();
  s.best_position.assign(s.positions.row(best).data(), s.positions.row(best).data() + dim);
  s.best_cost = s.costs[static_cast<std::size_t>(best)];
  for (auto _ : state) benchmark::DoNotOptimize(goa_step(s, config, 0.5, sphere));
}
BENCHMARK(BM_GoaStep)->Arg(5)->Arg(233)->Unit(benchmark::kMillisecond);

void BM_FitnessEvaluation(benchmark::State& state) {
  const NetworkSpec spec;
  LabeledDataset val;
  val.features = Matrix(469, 4);
  const auto values = random_vector(469 * 4, 6, 2.0);
  std::copy(values.begin(), values.end(), val.features.data());
  val.labels.resize(469);
  for (std::size_t i = 0; i < val.labels.size(); ++i) val.labels[i] = i % 2 ? kNormal : kFaulty;
  val.feature_names = {"a", "b", "c", "d"};
  const auto params = random_vector(param_count(spec), 7, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(fitness(params, spec, val));
}
BENCHMARK(BM_FitnessEvaluation);

void BM_JacobiEigen(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto values = random_vector(static_cast<std::size_t>(n * n), 8, 1.0);
  ColMatrix a = Eigen::Map<const ColMatrix>(values.data(), n, n);
  const ColMatrix c = 0.5 * (a + a.transpose());
  for (auto _ : state) benchmark::DoNotOptimize(sym_eigen(c));
}
BENCHMARK(BM_JacobiEigen)->Arg(4)->Arg(12)->Arg(32);

void BM_RocAuc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto scores = random_vector(n, 9, 1.0);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i % 2 ? kNormal : kFaulty;
  for (auto _ : state) benchmark::DoNotOptimize(roc_auc(scores, labels));
}
BENCHMARK(BM_RocAuc)->Arg(2812);

}  // namespace

BENCHMARK_MAIN();
