// Copyright 2026 The homoglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "homoglab/catalog.hpp"
#include "homoglab/error.hpp"
#include "homoglab/integrate.hpp"

namespace homoglab {
namespace {

Rhs linear(double a) {
  return [a](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = a * y[0];
  };
}

TEST(Integrate, DyadicFloor) {
  EXPECT_EQ(dyadic_floor(0.1), 0.0625);
  EXPECT_EQ(dyadic_floor(1.0), 1.0);
  EXPECT_EQ(dyadic_floor(3.0), 2.0);
  EXPECT_EQ(dyadic_floor(1.0 / 16.0), 1.0 / 16.0);
}

TEST(Integrate, ExponentialWithinBudget) {
  double c[1] = {1.0};
  for (double budget : {1e-6, 1e-9}) {
    Trajectory tr = solve(linear(1.0), c, 1.0, budget);
    EXPECT_EQ(tr.t_end(), 1.0);
    EXPECT_LE(std::abs(tr.final_state()[0] - std::exp(1.0)), budget);
    EXPECT_EQ(tr.error_budget, budget);
  }
}

TEST(Integrate, HarmonicTravelTime) {
  // v' = 2 + sin(2 pi v) needs exactly 1/sqrt(3) per unit of v.
  FieldSpec f = catalog("harmonic").field;
  double c[1] = {0.0};
  Trajectory tr = solve_rescaled(f, c, 7.0 / std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(tr.final_state()[0], 7.0, 1e-9);
}

TEST(Integrate, DenseOutput) {
  Rhs rhs = [](double t, std::span<const double>, std::span<double> dy) {
    dy[0] = std::cos(t);
  };
  double c[1] = {0.0};
  Trajectory tr = solve(rhs, c, 10.0, 1e-10);
  for (double t = 0.0; t <= 10.0; t += 0.37) {
    EXPECT_NEAR(tr.query(t), std::sin(t), 1e-6);
  }
  EXPECT_THROW(tr.query(10.5), DomainError);
  EXPECT_THROW(tr.query(-0.1), DomainError);
}

TEST(Integrate, ObserverAndThinning) {
  double c[1] = {1.0};
  std::size_t seen = 0;
  SolveOptions o;
  o.max_nodes = 16;
  o.observer = [&](double, std::span<const double>) { ++seen; };
  Trajectory tr = solve(linear(-1.0), c, 50.0, 1e-10, o);
  EXPECT_EQ(seen, tr.stats.steps + 1);
  EXPECT_LE(tr.size(), 17u);
  EXPECT_EQ(tr.t_end(), 50.0);
  EXPECT_EQ(tr.t_begin(), 0.0);
  EXPECT_GT(tr.stats.evals, tr.stats.steps);
}

TEST(Integrate, Failures) {
  double c[1] = {1.0};
  Rhs blowup = [](double, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[0] * y[0];
  };
  EXPECT_THROW(solve(blowup, c, 2.0, 1e-8), IntegrationError);
  EXPECT_THROW(solve(linear(1.0), c, 1.0, 0.0), DomainError);
  EXPECT_THROW(solve(linear(1.0), c, -1.0, 1e-6), DomainError);
}

TEST(Integrate, SemiStableEquilibriumIsNotCrossed) {
  // w = v + tau obeys w' = tri(w): attracted to 1/2 from below, repelled
  // above. Rounding must not push the solution past it.
  FieldSpec f = catalog("sharpness").field;
  double c[1] = {0.0};
  Trajectory tr = solve_rescaled(f, c, 1000.0, 1e-10);
  double w = tr.final_state()[0] + 1000.0;
  EXPECT_NEAR(w, 0.5, 1e-9);
  EXPECT_LE(w, 0.5 + 1e-12);
}

TEST(Integrate, RescalingAndDeterminism) {
  FieldSpec f = catalog("harmonic").field;
  double eps = 0.01, c[1] = {0.3};
  Trajectory a = solve_fast(f, eps, c, 2.0, 1e-8);
  Trajectory b = solve_fast(f, eps, c, 2.0, 1e-8);
  double v0[1] = {c[0] / eps};
  Trajectory v = solve_rescaled(f, v0, 2.0 / eps, 1e-8 / eps);
  EXPECT_NEAR(a.final_state()[0], eps * v.final_state()[0], 1e-12);
  EXPECT_EQ(a.final_state()[0], b.final_state()[0]);
  EXPECT_EQ(a.t_end(), 2.0);
  Trajectory r = a.rescaled(2.0, 3.0);
  EXPECT_EQ(r.t_end(), 4.0);
  EXPECT_EQ(r.final_state()[0], 3.0 * a.final_state()[0]);
}

TEST(Integrate, MultiScaleConvergesToEffectivePath) {
  // u-bar(t) = cosh(acosh 3 - t) / 2 until it reaches 1/2 at t = acosh 3.
  FieldSpec f = catalog("wiggly-gradient").field;
  double c[1] = {1.5};
  for (double eps : {1e-2, 1e-3}) {
    Trajectory tr = solve_fast(f, eps, c, 1.0, 1e-3 * eps);
    double exact = 0.5 * std::cosh(std::acosh(3.0) - 1.0);
    EXPECT_LE(std::abs(tr.final_state()[0] - exact), 2.0 * eps) << eps;
  }
}

}  // namespace
}  // namespace homoglab
