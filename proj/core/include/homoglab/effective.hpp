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

#include <cstdint>
#include <functional>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <string_view>
#include <vector>

#include "homoglab/fields.hpp"

namespace homoglab {

enum class EffectiveMethod {
  LongTimeAverage,
  HarmonicMean,
  // Autonomous scalar field with a zero: every orbit is trapped, f-bar = 0.
  Equilibrium,
};

std::string_view to_string(EffectiveMethod m);

struct EffectiveConstant {
  std::vector<double> value;
  std::vector<double> error_bar;
  std::int64_t K = 0;  // integer horizon; 0 for quadrature-based methods
  EffectiveMethod method = EffectiveMethod::LongTimeAverage;
  // False when the bar rests on a sampled constant or a quadrature estimate.
  bool rigorous = true;

  double scalar() const { return value.at(0); }
  double bar() const { return error_bar.at(0); }
};

struct EffectiveOptions {
  // Allow the harmonic-mean and equilibrium shortcuts for autonomous fields.
  bool shortcuts = true;
  // Largest accepted horizon K for the long-time average.
  std::int64_t max_K = 20'000'000;
  int sample_grid = 1024;
};

// f-bar of a scalar single-scale field with an error bar of at most about
// 1.1 tol. The long-time average uses |v(K;0)/K - f-bar| <= (1+2|f|)/K.
EffectiveConstant effective_constant(
    const FieldSpec& field, double tol,
    const EffectiveOptions& opts = EffectiveOptions());

// Principal branch of the inverse of x e^x, x >= 0.
double lambert_w(double x);

// 2 / floor(W(1/delta) / kappa); +infinity when the floor is zero.
double modulus_bound(double kappa, double delta);

// The single-scale field r, tau -> f(r, tau, u0, t0).
FieldSpec freeze(const FieldSpec& field, double u0, double t0);

EffectiveConstant effective_field(
    const FieldSpec& field, double u0, double t0, double tol,
    const EffectiveOptions& opts = EffectiveOptions());

using EffectiveFn = std::function<EffectiveConstant(double u, double t)>;

// Thread-safe cache of f-bar values keyed on rounded (u, t). Writers that
// race store values that agree within the estimator tolerance.
class EffectiveMemo {
 public:
  bool lookup(std::int64_t ku, std::int64_t kt, double* value) const;
  void store(std::int64_t ku, std::int64_t kt, double value);
  std::size_t size() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const {
      return std::hash<std::int64_t>()(k.first * 0x9e3779b97f4a7c15LL ^ k.second);
    }
  };
  mutable std::shared_mutex mu_;
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, double, KeyHash> map_;
};

struct EffectiveSolveOptions {
  // Bound on |f-bar|, sizes the bisection bracket.
  double sup_norm = 0.0;
  // Memo keys are (u, t) rounded to this resolution.
  double key_resolution = 1e-7;
  // Drop t from memo keys.
  bool time_independent = false;
  // Allowed monotonicity slack between bracket ends.
  double monotonicity_slack = 0.0;
  // Optional shared cache; a private one is used when null.
  EffectiveMemo* memo = nullptr;
};

// Piecewise-linear path of the implicit Euler scheme.
struct EffectivePath {
  std::vector<double> t;
  std::vector<double> u;
  std::size_t evaluations = 0;
  std::size_t memo_hits = 0;

  double value(double time) const;
};

// Implicit Euler u_{k+1} = u_k + h f-bar(u_{k+1}, t_{k+1}) solved by
// bisection. Throws MonotonicityError when the bracket fails.
EffectivePath solve_effective(const EffectiveFn& fbar, double c, double T,
                              double h, const EffectiveSolveOptions& opts);

// v((s+l)t; (s+l)c) - v(st; sc) - v(lt; lc).
double subadditivity_defect(const FieldSpec& field, double sigma, double l,
                            double t, double c, double budget);

struct Oscillation {
  double M = 0.0;
  double m = 0.0;
};

// max and min over c in a grid of [0,1) of v(tau; c) - c.
Oscillation oscillation(const FieldSpec& field, double tau, int grid,
                        double budget);

}  // namespace homoglab
