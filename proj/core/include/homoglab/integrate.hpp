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

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "homoglab/fields.hpp"

namespace homoglab {

using Rhs = std::function<void(double t, std::span<const double> y,
                               std::span<double> dy)>;
// Called on every accepted step, including the initial point.
using StepObserver = std::function<void(double t, std::span<const double> y)>;

struct SolveStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t evals = 0;
};

struct SolveOptions {
  // Largest step; rounded down to a power of two.
  double h_max = 1.0 / 16.0;
  // Stored nodes are thinned by two whenever this count is exceeded.
  std::size_t max_nodes = 1'000'000;
  StepObserver observer;
};

// Time-indexed solution with cubic Hermite dense output.
class Trajectory {
 public:
  explicit Trajectory(int dimension = 1) : dim_(dimension) {}

  int dimension() const { return dim_; }
  std::size_t size() const { return t_.size(); }
  double time(std::size_t i) const { return t_[i]; }
  std::span<const double> state(std::size_t i) const {
    return {y_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> derivative(std::size_t i) const {
    return {dy_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  double t_begin() const { return t_.front(); }
  double t_end() const { return t_.back(); }
  std::span<const double> final_state() const { return state(size() - 1); }

  // Throws DomainError outside [t_begin, t_end].
  void query(double t, std::span<double> out) const;
  double query(double t, int component = 0) const;

  // Maps (t, y) to (time_scale t, state_scale y); derivatives scale by
  // state_scale / time_scale.
  Trajectory rescaled(double time_scale, double state_scale) const;

  void push(double t, std::span<const double> y, std::span<const double> dy);
  // Keeps every other node, always retaining the last one.
  void thin();

  double error_budget = 0.0;
  SolveStats stats;

 private:
  int dim_;
  std::vector<double> t_;
  std::vector<double> y_;
  std::vector<double> dy_;
};

// Classical RK4 with step doubling on [0, T]. A step of size h is accepted
// when the Richardson estimate is at most budget * h / T; the accepted
// value is the locally extrapolated one. Steps are powers of two except
// possibly the last, so grid times are exact.
Trajectory solve(const Rhs& rhs, std::span<const double> c, double T,
                 double budget, const SolveOptions& opts = SolveOptions());

// u^eps(t; c) on [0, T]. Single-scale and quasi-periodic fields integrate
// v' = f(v, tau) from c / eps over [0, T / eps] with budget / eps and
// rescale; multi-scale fields integrate u' = f(u/eps, t/eps, u, t) in slow
// time with steps at most 0.1 eps. The observer sees slow variables.
Trajectory solve_fast(const FieldSpec& field, double eps,
                      std::span<const double> c, double T, double budget,
                      const SolveOptions& opts = SolveOptions());

// Rescaled-time solution v(tau; c) of v' = f(v, tau) on [0, tau_end].
Trajectory solve_rescaled(const FieldSpec& field, std::span<const double> c,
                          double tau_end, double budget,
                          const SolveOptions& opts = SolveOptions());

// Largest power of two not exceeding x.
double dyadic_floor(double x);

}  // namespace homoglab
