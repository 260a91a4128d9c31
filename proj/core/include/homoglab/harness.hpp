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

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "homoglab/csv.hpp"
#include "homoglab/fields.hpp"

namespace homoglab {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
  // Some errors were non-positive and replaced by the floor.
  bool floored = false;
};

// Least squares of log(error) against log(eps). Needs at least 3 points.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double floor = 1e-300);

struct SweepRow {
  double eps = 0.0;
  double horizon = 0.0;
  double sup_error = 0.0;
  double theory_bound = 0.0;
  double ratio = 0.0;
};

struct SweepTable {
  std::string scenario;
  std::vector<SweepRow> rows;
  RateFit fit;
  bool valid = true;
  std::string note;

  double max_ratio() const;
  // scenario,epsilon,horizon,sup_error,theory_bound,ratio
  CsvTable csv() const;
};

// sup over accepted steps of max_i |u_i(t) - c_i - drift_i t| for
// u = u^eps(.; c) on [0, T].
double drift_error(const FieldSpec& field, double eps,
                   std::span<const double> c, std::span<const double> drift,
                   double T, double budget);

// harmonic, sharpness, qp-cosine, shear-golden, coupled-sine,
// transport-harmonic, transport-shear.
std::vector<std::string> sweep_scenarios();

// Per eps: solve with the scenario's solver, take the sup over accepted
// steps (or grid points) of the error and attach the rate bound
// for it. Scenarios without a numeric constant use theory_bound = eps.
// budget <= 0 selects 0.01 * min(eps).
SweepTable sweep(std::string_view scenario, const std::vector<double>& eps_list,
                 double T, double budget = 0.0);

// |u(t*) + t*| at t* = eps |log eps| for the sharpness scenario.
double sharpness_witness(double eps, double budget);

struct MultiscaleRow {
  double eps = 0.0;
  double cutoff = 0.0;           // eps |log eps|
  double long_normalized = 0.0;  // sup_{t > cutoff} err |log eps| / t
  double short_normalized = 0.0; // sup_{t <= cutoff} err / eps
  double constant = 0.0;         // max of the two
  // max over t <= cutoff of err - 2 |f| t (safety factor applied); <= 0
  // when the short-time bound holds.
  double short_excess = 0.0;
  // max over t <= cutoff of err - min(C_emp eps, 2 |f| t), filled in once
  // C_emp is known.
  double short_excess_min = 0.0;
};

struct MultiscaleReport {
  std::vector<MultiscaleRow> rows;
  double C_emp = 0.0;
  double long_stability = 0.0;      // max / min of long_normalized
  double constant_stability = 0.0;  // max / min of constant
  double sup_norm = 0.0;
  double kappa = 0.0;
  double effective_h = 0.0;
  std::size_t fbar_evaluations = 0;
};

// Builds u-bar once with effective_field and solve_effective (step
// min(eps)/10, tolerance tol) and compares each u^eps against it.
MultiscaleReport verify_multiscale(const FieldSpec& field, double c, double T,
                                   const std::vector<double>& eps_list,
                                   double tol, double budget);

}  // namespace homoglab
