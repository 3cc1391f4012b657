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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wsnfd/dataset.hpp"

namespace wsnfd {

/// Box constraints, one [lower, upper] interval per dimension.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static Bounds uniform(std::size_t dimension, double lo, double hi) {
    return {std::vector<double>(dimension, lo), std::vector<double>(dimension, hi)};
  }
  std::size_t dimension() const noexcept { return lower.size(); }
  void validate() const;
  bool operator==(const Bounds&) const = default;
};

/// Cost to minimize. `evaluate` must be deterministic and safe to call
/// concurrently when more than one thread is configured.
struct Objective {
  std::size_t arity = 0;
  std::function<double(std::span<const double>)> evaluate;
};

struct GoaConfig {
  std::size_t population = 100;
  std::size_t iterations = 150;
  double c_max = 1.0;
  double c_min = 1e-5;
  double f = 0.5;  // attraction intensity
  double l = 1.5;  // attractive length scale
  Bounds bounds;
  double clip_low = 1.0;  // per-dimension distances are clipped into [clip_low, clip_high] before s(r)
  double clip_high = 4.0;
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // 0 = hardware concurrency; results do not depend on it

  void validate() const;
  bool operator==(const GoaConfig&) const = default;
};

struct PsoConfig {
  std::size_t population = 100;
  std::size_t iterations = 150;
  double inertia = 0.7298;
  double cognitive = 1.49618;
  double social = 1.49618;
  double velocity_clamp = 0.2;  // fraction of (upper - lower); 0 disables
  Bounds bounds;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  void validate() const;
  bool operator==(const PsoConfig&) const = default;
};

struct SwarmState {
  Matrix positions;  // population x dimension
  std::vector<double> costs;
  std::vector<double> best_position;
  double best_cost = 0.0;
  std::size_t iteration = 0;
  std::size_t evaluations = 0;
};

struct OptimizerRun {
  std::vector<double> best_position;
  double best_cost = 0.0;
  std::vector<double> convergence;  // best-so-far cost; entry 0 is the initial population
  std::size_t evaluations = 0;
  std::vector<double> initial_costs;

  bool operator==(const OptimizerRun&) const = default;
};

/// Called once after initialization and once after every iteration.
using IterationObserver = std::function<void(const SwarmState&)>;

/// s(r) = f e^{-r/l} - e^{-r}: repulsive below the comfort distance, attractive above it.
double social_force(double r, double f, double l) noexcept;

/// Linear decay from c_max at t = 0 to c_min at t = t_max.
double comfort_coefficient(std::size_t t, std::size_t t_max, double c_max, double c_min);

/// Uniform positions inside the bounds; agent i draws from its own substream of `seed`,
/// so every optimizer given the same (bounds, population, seed) starts from the same swarm.
Matrix initialize_population(const Bounds& bounds, std::size_t population, std::uint64_t seed);

/// Costs for every row, evaluated in parallel but stored by agent index.
std::vector<double> evaluate_population(const Objective& objective, const Matrix& positions, std::size_t threads);

/// One synchronous grasshopper update: in every dimension d each agent moves to
///   c * sum_{j != i} c * (ub_d - lb_d) / 2 * s(clip(|P_j^d - P_i^d|)) * (P_j^d - P_i^d) / d_ij + T_d
/// using the previous positions, is clamped to the bounds, and is re-evaluated.
/// Coincident agents (d_ij = 0) contribute nothing.
SwarmState goa_step(const SwarmState& state, const GoaConfig& config, double c, const Objective& objective);

OptimizerRun goa_optimize(const Objective& objective, const GoaConfig& config, const IterationObserver& observer = {});

/// Global-best PSO with velocity clamping and position clamping; velocities start at zero.
OptimizerRun pso_optimize(const Objective& objective, const PsoConfig& config, const IterationObserver& observer = {});

/// First iteration whose best cost is within `tolerance` of the final best cost.
std::size_t plateau_iteration(std::span<const double> convergence, double tolerance = 0.0);

}  // namespace wsnfd
