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

#include <optional>
#include <span>
#include <vector>

#include "homoglab/effective.hpp"
#include "homoglab/fields.hpp"

namespace homoglab {

// Coefficient of the zero mode.
double mean_value(const QuasiPeriodicField& F);

struct DiophantineReport {
  int k_max = 0;
  std::vector<int> worst_k;
  // min over 0 < |k|_inf <= k_max of |xi.k| |k|^sigma, |k| Euclidean.
  double worst_ratio = 0.0;
  bool passes = false;
};

// Exhaustive scan; one of each pair +-k. passes means worst_ratio >= c_xi
// when c_xi is given, otherwise worst_ratio > 0.
DiophantineReport check_diophantine(std::span<const double> xi, double sigma,
                                    int k_max,
                                    std::optional<double> c_xi = std::nullopt);

// (sum_k (1+|k|^2)^s |F_k|^2)^(1/2).
double hs_norm(const QuasiPeriodicField& F, double s);

// Asymptotic speed of v' = F(xi0 v): the torus harmonic mean
// (int 1/F)^(-1), by tensor trapezoid rules refined until stable.
EffectiveConstant effective_speed(const QuasiPeriodicField& F, double tol);

struct QpRateRow {
  double eps = 0.0;
  double horizon = 0.0;
  double sup_error = 0.0;       // against c + speed t
  double ratio = 0.0;           // sup_error / eps
  double sup_error_mean = 0.0;  // against c + M_f t, for reference
};

struct QpRateTable {
  double mean = 0.0;   // M_f
  double speed = 0.0;  // harmonic mean drift
  std::vector<QpRateRow> rows;
};

QpRateTable verify_qp_rate(const QuasiPeriodicField& F,
                           const std::vector<double>& eps_list, double c,
                           double T, double budget);

}  // namespace homoglab
