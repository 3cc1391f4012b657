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

#include <gtest/gtest.h>

#include <cmath>

#include "wsnfd/error.hpp"
#include "wsnfd/swarm.hpp"

using namespace wsnfd;

namespace {

Objective sphere(std::size_t d) {
  return {d, [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s;
          }};
}

GoaConfig sphere_goa(std::uint64_t seed) {
  GoaConfig c;
  c.population = 30;
  c.iterations = 100;
  c.bounds = Bounds::uniform(5, -5.0, 5.0);
  c.seed = seed;
  return c;
}

PsoConfig sphere_pso(std::uint64_t seed) {
  PsoConfig c;
  c.population = 30;
  c.iterations = 100;
  c.bounds = Bounds::uniform(5, -5.0, 5.0);
  c.seed = seed;
  return c;
}

bool monotone(const std::vector<double>& curve) {
  for (std::size_t i = 1; i < curve.size(); ++i)
    if (curve[i] > curve[i - 1]) return false;
  return true;
}

SwarmState state_from(const Matrix& positions, const Objective& objective, std::vector<double> best) {
  SwarmState s;
  s.positions = positions;
  s.costs = evaluate_population(objective, positions, 1);
  s.best_position = std::move(best);
  s.best_cost = objective.evaluate(s.best_position);
  return s;
}

}  // namespace

TEST(SocialForce, Values) {
  EXPECT_LE(std::abs(social_force(2.0794, 0.5, 1.5)), 1e-3);
  EXPECT_NEAR(social_force(1.0, 0.5, 1.5), 0.5 * std::exp(-1.0 / 1.5) - std::exp(-1.0), 1e-15);
  EXPECT_NEAR(social_force(1.0, 0.5, 1.5), -0.11117, 1e-5);
  EXPECT_NEAR(social_force(4.0, 0.5, 1.5), 0.5 * std::exp(-4.0 / 1.5) - std::exp(-4.0), 1e-15);
  EXPECT_GT(social_force(4.0, 0.5, 1.5), 0.0);
}

TEST(SocialForce, ZeroCrossingAtThreeLnTwo) {
  const double r0 = 3.0 * std::log(2.0);
  EXPECT_LE(std::abs(social_force(r0, 0.5, 1.5)), 1e-9);
  EXPECT_LT(social_force(r0 - 1e-6, 0.5, 1.5), 0.0);
  EXPECT_GT(social_force(r0 + 1e-6, 0.5, 1.5), 0.0);
}

TEST(SocialForce, SignStructureBySampling) {
  const double r0 = 3.0 * std::log(2.0);
  for (int i = 1; i < 1000; ++i) {
    const double r = 10.0 * i / 1000.0;
    if (std::abs(r - r0) < 1e-9) continue;
    if (r < r0) EXPECT_LT(social_force(r, 0.5, 1.5), 0.0) << r;
    else EXPECT_GT(social_force(r, 0.5, 1.5), 0.0) << r;
  }
}

TEST(ComfortCoefficient, Values) {
  EXPECT_EQ(comfort_coefficient(0, 150, 1.0, 1e-5), 1.0);
  EXPECT_NEAR(comfort_coefficient(150, 150, 1.0, 1e-5), 1e-5, 1e-15);
  EXPECT_NEAR(comfort_coefficient(75, 150, 1.0, 1e-5), 0.500005, 1e-15);
  for (std::size_t t = 1; t <= 150; ++t)
    EXPECT_LT(comfort_coefficient(t, 150, 1.0, 1e-5), comfort_coefficient(t - 1, 150, 1.0, 1e-5));
}

TEST(GoaConfigValidate, Invariants) {
  auto c = sphere_goa(1);
  EXPECT_NO_THROW(c.validate());
  auto bad = c;
  bad.population = 1;
  EXPECT_THROW(bad.validate(), Error);
  bad = c;
  bad.iterations = 0;
  EXPECT_THROW(bad.validate(), Error);
  bad = c;
  bad.c_min = 2.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = c;
  bad.bounds.lower[2] = 5.0;
  EXPECT_THROW(bad.validate(), Error);
  bad = c;
  bad.f = 0.0;
  EXPECT_THROW(bad.validate(), Error);
}

TEST(InitializePopulation, WithinBoundsAndShared) {
  const auto b = Bounds::uniform(7, -2.0, 3.0);
  const Matrix p = initialize_population(b, 20, 9);
  EXPECT_GE(p.minCoeff(), -2.0);
  EXPECT_LE(p.maxCoeff(), 3.0);
  EXPECT_EQ(initialize_population(b, 20, 9), p);
  // Agent i's draw does not depend on the population size.
  EXPECT_EQ(initialize_population(b, 5, 9), Matrix(p.topRows(5)));
}

TEST(GoaStep, SingleAgentMovesToTarget) {
  const auto obj = sphere(2);
  GoaConfig c;
  c.bounds = Bounds::uniform(2, -1.0, 1.0);
  Matrix p(1, 2);
  p << 0.5, -0.5;
  const auto next = goa_step(state_from(p, obj, {0.25, 3.0}), c, 0.7, obj);
  EXPECT_EQ(next.positions(0, 0), 0.25);
  EXPECT_EQ(next.positions(0, 1), 1.0);
}

TEST(GoaStep, MirrorSymmetricPairStaysMirrored) {
  const auto obj = sphere(3);
  GoaConfig c;
  c.bounds = Bounds::uniform(3, -5.0, 5.0);
  Matrix p(2, 3);
  p << 1.5, -0.5, 2.0, -1.5, 0.5, -2.0;
  auto s = state_from(p, obj, {0.0, 0.0, 0.0});
  for (double coeff : {1.0, 0.6, 0.1}) {
    s = goa_step(s, c, coeff, obj);
    EXPECT_LE((s.positions.row(0) + s.positions.row(1)).cwiseAbs().maxCoeff(), 1e-9);
    s.best_position = {0.0, 0.0, 0.0};
    s.best_cost = 0.0;
  }
}

TEST(GoaStep, HandComputedPair) {
  const auto obj = sphere(1);
  GoaConfig c;
  c.bounds = Bounds::uniform(1, -5.0, 5.0);
  Matrix p(2, 1);
  p << -1.0, 2.0;
  const double coeff = 0.5;
  const auto next = goa_step(state_from(p, obj, {0.1}), c, coeff, obj);
  // |delta| = 3 in the band; unit direction.
  const double term = coeff * 5.0 * social_force(3.0, 0.5, 1.5);
  EXPECT_NEAR(next.positions(0, 0), coeff * term + 0.1, 1e-15);
  EXPECT_NEAR(next.positions(1, 0), -coeff * term + 0.1, 1e-15);
}

TEST(GoaStep, CoincidentAgentsContributeNothing) {
  const auto obj = sphere(2);
  GoaConfig c;
  c.bounds = Bounds::uniform(2, -5.0, 5.0);
  Matrix p(2, 2);
  p << 1.0, 1.0, 1.0, 1.0;
  const auto next = goa_step(state_from(p, obj, {0.5, -0.5}), c, 0.9, obj);
  EXPECT_EQ(next.positions(0, 0), 0.5);
  EXPECT_EQ(next.positions(1, 1), -0.5);
}

TEST(GoaStep, BoundsElitismAndEvaluations) {
  const auto obj = sphere(4);
  auto c = sphere_goa(3);
  c.bounds = Bounds::uniform(4, -1.0, 2.0);
  auto s = state_from(initialize_population(c.bounds, 12, 3), obj, std::vector<double>(4, 1.9));
  s.evaluations = 12;
  for (std::size_t t = 1; t <= 20; ++t) {
    const auto next = goa_step(s, c, comfort_coefficient(t, 20, 1.0, 1e-5), obj);
    EXPECT_GE(next.positions.minCoeff(), -1.0);
    EXPECT_LE(next.positions.maxCoeff(), 2.0);
    EXPECT_LE(next.best_cost, s.best_cost);
    EXPECT_EQ(next.evaluations, s.evaluations + 12);
    s = next;
  }
}

TEST(GoaStep, NonFiniteCost) {
  const Objective nan_obj{2, [](std::span<const double>) { return std::nan(""); }};
  GoaConfig c;
  c.bounds = Bounds::uniform(2, -1.0, 1.0);
  SwarmState s;
  s.positions = Matrix::Zero(2, 2);
  s.costs = {1.0, 1.0};
  s.best_position = {0.0, 0.0};
  s.best_cost = 1.0;
  try {
    goa_step(s, c, 0.5, nan_obj);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonFiniteCost);
  }
}

TEST(GoaOptimize, SphereConvergesInNineOfTenSeeds) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto run = goa_optimize(sphere(5), sphere_goa(seed));
    hits += run.best_cost <= 1e-2;
    EXPECT_TRUE(monotone(run.convergence));
    EXPECT_EQ(run.convergence.size(), 101u);
    EXPECT_EQ(run.evaluations, 30u * 101u);
  }
  EXPECT_GE(hits, 9);
}

TEST(GoaOptimize, ConstantObjectiveIsFlat) {
  const Objective flat{3, [](std::span<const double>) { return 4.0; }};
  auto c = sphere_goa(2);
  c.bounds = Bounds::uniform(3, -1.0, 1.0);
  c.iterations = 10;
  const auto run = goa_optimize(flat, c);
  for (double v : run.convergence) EXPECT_EQ(v, 4.0);
  EXPECT_EQ(run.best_cost, 4.0);
}

TEST(GoaOptimize, DeterministicAndThreadIndependent) {
  auto c = sphere_goa(4);
  c.iterations = 20;
  const auto a = goa_optimize(sphere(5), c);
  EXPECT_EQ(goa_optimize(sphere(5), c), a);
  c.threads = 3;
  EXPECT_EQ(goa_optimize(sphere(5), c), a);
}

TEST(GoaOptimize, ObserverSeesInBoundsStates) {
  auto c = sphere_goa(5);
  c.iterations = 15;
  std::size_t calls = 0;
  double last = INFINITY;
  goa_optimize(sphere(5), c, [&](const SwarmState& s) {
    EXPECT_EQ(s.iteration, calls);
    EXPECT_GE(s.positions.minCoeff(), -5.0);
    EXPECT_LE(s.positions.maxCoeff(), 5.0);
    EXPECT_EQ(s.best_cost, std::min(last, *std::min_element(s.costs.begin(), s.costs.end())));
    last = s.best_cost;
    ++calls;
  });
  EXPECT_EQ(calls, 16u);
}

TEST(GoaOptimize, ArityMismatch) { EXPECT_THROW(goa_optimize(sphere(4), sphere_goa(1)), Error); }

TEST(PsoOptimize, SphereConvergesInNineOfTenSeeds) {
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto run = pso_optimize(sphere(5), sphere_pso(seed));
    hits += run.best_cost <= 1e-2;
    EXPECT_TRUE(monotone(run.convergence));
    EXPECT_EQ(run.evaluations, 30u * 101u);
  }
  EXPECT_GE(hits, 9);
}

TEST(PsoOptimize, FrozenWithoutCoefficients) {
  auto c = sphere_pso(6);
  c.inertia = 0.0;
  c.cognitive = 0.0;
  c.social = 0.0;
  c.iterations = 10;
  std::vector<Matrix> seen;
  const auto run = pso_optimize(sphere(5), c, [&](const SwarmState& s) { seen.push_back(s.positions); });
  for (const auto& p : seen) EXPECT_EQ(p, seen.front());
  for (double v : run.convergence) EXPECT_EQ(v, run.convergence.front());
}

TEST(PsoOptimize, DeterministicAndThreadIndependent) {
  auto c = sphere_pso(7);
  c.iterations = 20;
  const auto a = pso_optimize(sphere(5), c);
  EXPECT_EQ(pso_optimize(sphere(5), c), a);
  c.threads = 4;
  EXPECT_EQ(pso_optimize(sphere(5), c), a);
}

TEST(PsoOptimize, SharesInitialSwarmWithGoa) {
  const auto goa = goa_optimize(sphere(5), sphere_goa(8));
  const auto pso = pso_optimize(sphere(5), sphere_pso(8));
  EXPECT_EQ(goa.initial_costs, pso.initial_costs);
  EXPECT_EQ(goa.convergence.front(), pso.convergence.front());
}

TEST(PlateauIteration, FirstIterationAtFinalValue) {
  const std::vector<double> curve{5, 4, 2, 2, 2};
  EXPECT_EQ(plateau_iteration(curve), 2u);
  EXPECT_EQ(plateau_iteration(curve, 2.5), 1u);
  const std::vector<double> flat{1, 1, 1};
  EXPECT_EQ(plateau_iteration(flat), 0u);
}
