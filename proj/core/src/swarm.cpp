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

#include "wsnfd/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "wsnfd/error.hpp"
#include "wsnfd/random.hpp"

namespace wsnfd {
namespace {

std::size_t resolve_threads(std::size_t requested, std::size_t work) {
  std::size_t n = requested == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : requested;
  return std::max<std::size_t>(1, std::min(n, work));
}

// Runs body(i) for i in [0, n) over contiguous chunks; body must only write to slot i.
template <typename Body>
void parallel_for(std::size_t n, std::size_t threads, Body&& body) {
  const std::size_t workers = resolve_threads(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
}

void check_objective(const Objective& objective, const Bounds& bounds) {
  if (!objective.evaluate) throw Error(ErrorKind::InvalidArgument, "objective has no evaluate function");
  if (objective.arity != bounds.dimension())
    throw Error(ErrorKind::DimensionMismatch, "objective arity " + std::to_string(objective.arity) +
                                                  " differs from bounds dimension " + std::to_string(bounds.dimension()));
}

void clamp_row(Matrix& positions, Eigen::Index row, const Bounds& bounds) {
  for (Eigen::Index d = 0; d < positions.cols(); ++d) {
    const auto k = static_cast<std::size_t>(d);
    positions(row, d) = std::clamp(positions(row, d), bounds.lower[k], bounds.upper[k]);
  }
}

// Elitist update in fixed agent order: strictly better costs replace the best, so ties keep the first found.
void absorb_costs(SwarmState& state) {
  for (std::size_t i = 0; i < state.costs.size(); ++i) {
    if (state.costs[i] < state.best_cost) {
      state.best_cost = state.costs[i];
      const auto row = state.positions.row(static_cast<Eigen::Index>(i));
      state.best_position.assign(row.data(), row.data() + row.size());
    }
  }
}

SwarmState initial_state(const Objective& objective, const Bounds& bounds, std::size_t population,
                         std::uint64_t seed, std::size_t threads) {
  SwarmState state;
  state.positions = initialize_population(bounds, population, seed);
  state.costs = evaluate_population(objective, state.positions, threads);
  state.evaluations = population;
  state.best_cost = state.costs.front();
  const auto row0 = state.positions.row(0);
  state.best_position.assign(row0.data(), row0.data() + row0.size());
  absorb_costs(state);
  return state;
}

}  // namespace

void Bounds::validate() const {
  if (lower.size() != upper.size()) throw Error(ErrorKind::DimensionMismatch, "bounds have unequal lengths");
  if (lower.empty()) throw Error(ErrorKind::InvalidArgument, "bounds are empty");
  for (std::size_t d = 0; d < lower.size(); ++d)
    if (!(lower[d] < upper[d])) throw Error(ErrorKind::InvalidArgument, "lower bound must be below upper bound");
}

void GoaConfig::validate() const {
  if (population < 2) throw Error(ErrorKind::InvalidArgument, "GOA population must be >= 2");
  if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "GOA iterations must be >= 1");
  if (!(c_max > c_min && c_min > 0.0)) throw Error(ErrorKind::InvalidArgument, "need c_max > c_min > 0");
  if (!(f > 0.0 && l > 0.0)) throw Error(ErrorKind::InvalidArgument, "need f > 0 and l > 0");
  if (!(clip_low > 0.0 && clip_low <= clip_high)) throw Error(ErrorKind::InvalidArgument, "need 0 < clip_low <= clip_high");
  bounds.validate();
}

void PsoConfig::validate() const {
  if (population < 1) throw Error(ErrorKind::InvalidArgument, "PSO population must be >= 1");
  if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "PSO iterations must be >= 1");
  if (inertia < 0.0 || cognitive < 0.0 || social < 0.0 || velocity_clamp < 0.0)
    throw Error(ErrorKind::InvalidArgument, "PSO coefficients must be non-negative");
  bounds.validate();
}

double social_force(double r, double f, double l) noexcept { return f * std::exp(-r / l) - std::exp(-r); }

double comfort_coefficient(std::size_t t, std::size_t t_max, double c_max, double c_min) {
  if (t_max < 1 || t > t_max) throw Error(ErrorKind::InvalidArgument, "need 0 <= t <= t_max and t_max >= 1");
  return c_max - static_cast<double>(t) * (c_max - c_min) / static_cast<double>(t_max);
}

Matrix initialize_population(const Bounds& bounds, std::size_t population, std::uint64_t seed) {
  bounds.validate();
  const auto dim = bounds.dimension();
  Matrix positions(static_cast<Eigen::Index>(population), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < population; ++i) {
    auto rng = substream(seed, {stream::kInit, i});
    for (std::size_t d = 0; d < dim; ++d)
      positions(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          bounds.lower[d] + uniform01(rng) * (bounds.upper[d] - bounds.lower[d]);
  }
  return positions;
}

std::vector<double> evaluate_population(const Objective& objective, const Matrix& positions, std::size_t threads) {
  const auto n = static_cast<std::size_t>(positions.rows());
  std::vector<double> costs(n);
  parallel_for(n, threads, [&](std::size_t i) {
    const auto row = positions.row(static_cast<Eigen::Index>(i));
    costs[i] = objective.evaluate(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
  });
  for (std::size_t i = 0; i < n; ++i)
    if (!std::isfinite(costs[i]))
      throw Error(ErrorKind::NonFiniteCost, "objective returned a non-finite cost for agent " + std::to_string(i));
  return costs;
}

SwarmState goa_step(const SwarmState& state, const GoaConfig& config, double c, const Objective& objective) {
  const auto& bounds = config.bounds;
  check_objective(objective, bounds);
  const Eigen::Index n = state.positions.rows();
  const Eigen::Index dim = state.positions.cols();
  if (static_cast<std::size_t>(dim) != bounds.dimension() || state.best_position.size() != bounds.dimension())
    throw Error(ErrorKind::DimensionMismatch, "swarm state does not match the bounds dimension");

  Eigen::VectorXd half_range(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    const auto k = static_cast<std::size_t>(d);
    half_range(d) = (bounds.upper[k] - bounds.lower[k]) / 2.0;
  }
  const Eigen::Map<const Eigen::RowVectorXd> target(state.best_position.data(), dim);

  SwarmState next;
  next.positions.resize(n, dim);
  next.iteration = state.iteration + 1;

  // Each pair is evaluated once: the j -> i term is the negated i -> j term, and
  // every agent still receives its terms in ascending partner order.
  Matrix social = Matrix::Zero(n, dim);
  std::vector<double> term(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* pi = state.positions.row(i).data();
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double* pj = state.positions.row(j).data();
      double sq = 0.0;
      for (Eigen::Index d = 0; d < dim; ++d) sq += (pj[d] - pi[d]) * (pj[d] - pi[d]);
      const double dist = std::sqrt(sq);
      if (dist == 0.0) continue;
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double delta = pj[d] - pi[d];
        const double r = std::clamp(std::abs(delta), config.clip_low, config.clip_high);
        term[static_cast<std::size_t>(d)] = social_force(r, config.f, config.l) * delta / dist;
      }
      double* si = social.row(i).data();
      double* sj = social.row(j).data();
      for (Eigen::Index d = 0; d < dim; ++d) {
        si[d] += term[static_cast<std::size_t>(d)];
        sj[d] -= term[static_cast<std::size_t>(d)];
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    // c * sum_j (c * half_range * s * unit) with the per-dimension factor pulled out of the sum.
    next.positions.row(i) = c * (c * half_range.transpose().cwiseProduct(social.row(i))) + target;
    clamp_row(next.positions, i, bounds);
  }

  next.costs = evaluate_population(objective, next.positions, config.threads);
  next.evaluations = state.evaluations + static_cast<std::size_t>(n);
  next.best_position = state.best_position;
  next.best_cost = state.best_cost;
  absorb_costs(next);
  return next;
}

OptimizerRun goa_optimize(const Objective& objective, const GoaConfig& config, const IterationObserver& observer) {
  config.validate();
  check_objective(objective, config.bounds);

  auto state = initial_state(objective, config.bounds, config.population, config.seed, config.threads);
  OptimizerRun run;
  run.initial_costs = state.costs;
  run.convergence.push_back(state.best_cost);
  if (observer) observer(state);

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const double c = comfort_coefficient(t, config.iterations, config.c_max, config.c_min);
    state = goa_step(state, config, c, objective);
    run.convergence.push_back(state.best_cost);
    if (observer) observer(state);
  }
  run.best_position = state.best_position;
  run.best_cost = state.best_cost;
  run.evaluations = state.evaluations;
  return run;
}

OptimizerRun pso_optimize(const Objective& objective, const PsoConfig& config, const IterationObserver& observer) {
  config.validate();
  const auto& bounds = config.bounds;
  check_objective(objective, bounds);

  auto state = initial_state(objective, bounds, config.population, config.seed, config.threads);
  const Eigen::Index n = state.positions.rows();
  const Eigen::Index dim = state.positions.cols();
  Matrix velocity = Matrix::Zero(n, dim);
  Matrix personal_best = state.positions;
  std::vector<double> personal_cost = state.costs;

  Eigen::VectorXd vmax(dim);
  for (Eigen::Index d = 0; d < dim; ++d) {
    const auto k = static_cast<std::size_t>(d);
    vmax(d) = config.velocity_clamp > 0.0 ? config.velocity_clamp * (bounds.upper[k] - bounds.lower[k])
                                          : std::numeric_limits<double>::infinity();
  }

  OptimizerRun run;
  run.initial_costs = state.costs;
  run.convergence.push_back(state.best_cost);
  if (observer) observer(state);

  for (std::size_t t = 1; t <= config.iterations; ++t) {
    const std::vector<double> global_best = state.best_position;
    parallel_for(static_cast<std::size_t>(n), config.threads, [&](std::size_t idx) {
      const auto i = static_cast<Eigen::Index>(idx);
      auto rng = substream(config.seed, {stream::kPso, t, idx});
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double r1 = uniform01(rng);
        const double r2 = uniform01(rng);
        const double x = state.positions(i, d);
        double v = config.inertia * velocity(i, d) + config.cognitive * r1 * (personal_best(i, d) - x) +
                   config.social * r2 * (global_best[static_cast<std::size_t>(d)] - x);
        v = std::clamp(v, -vmax(d), vmax(d));
        velocity(i, d) = v;
        state.positions(i, d) = x + v;
      }
      clamp_row(state.positions, i, bounds);
    });

    state.costs = evaluate_population(objective, state.positions, config.threads);
    state.evaluations += static_cast<std::size_t>(n);
    state.iteration = t;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (state.costs[k] < personal_cost[k]) {
        personal_cost[k] = state.costs[k];
        personal_best.row(i) = state.positions.row(i);
      }
    }
    absorb_costs(state);
    run.convergence.push_back(state.best_cost);
    if (observer) observer(state);
  }
  run.best_position = state.best_position;
  run.best_cost = state.best_cost;
  run.evaluations = state.evaluations;
  return run;
}

std::size_t plateau_iteration(std::span<const double> convergence, double tolerance) {
  if (convergence.empty()) return 0;
  const double final_cost = convergence.back();
  for (std::size_t t = 0; t < convergence.size(); ++t)
    if (convergence[t] - final_cost <= tolerance) return t;
  return convergence.size() - 1;
}

}  // namespace wsnfd
