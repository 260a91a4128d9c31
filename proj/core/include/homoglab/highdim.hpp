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
#include <vector>

#include "homoglab/effective.hpp"
#include "homoglab/fields.hpp"

namespace homoglab {

// Empirical constant for v_i(tau; c2) - v_i(tau; c1) <= C0, c1 - c2 in
// [0,1]^n. A falsification tool: sampling can exhibit a large C0 but can
// never certify one.
struct BoundedMotionReport {
  double C0_hat = 0.0;
  double horizon = 0.0;
  std::size_t pair_grid = 0;  // number of (c2, c1) pairs
  double sample_dt = 0.0;     // comparison time grid
  std::vector<double> worst_c2;
  std::vector<double> worst_c1;
  std::vector<double> per_component;
};

// c2 ranges over {j/p}^n in [0,1)^n and the offset c1 - c2 over the
// nonzero points of {j/p : j = 0..p}^n, p = pairs_per_axis. Both trajectories are compared
// on a uniform time grid of spacing sample_dt through dense output.
BoundedMotionReport estimate_c0(const FieldSpec& field, double T,
                                int pairs_per_axis, double budget,
                                double sample_dt = 0.25);

// value_i = v_i(K; 0) / K with K = ceil(max_i (1 + C0 + 2|f_i|) / tol).
// rigorous marks a C0 backed by a proof rather than sampling.
EffectiveConstant rotation_vector(const FieldSpec& field, double C0, double tol,
                                  bool rigorous_C0, double budget = 0.0);

// Autonomous field xi / G(v) on the torus, G given by Fourier modes.
FieldSpec shear_field(std::span<const double> xi, const ModeMap& G);

// Corrector theta with D theta . xi = G - M_G.
struct Conjugation {
  std::vector<double> xi;
  double mean_G = 0.0;
  ModeMap theta_modes;  // G_k / (2 pi i k.xi)
  double sup_bound = 0.0;  // sum_k |G_k| / (2 pi |k.xi|)

  double theta(std::span<const double> v) const;
  // 1 + 2 |xi|_inf |theta|_inf / M_G.
  double c0_bound() const;
};

Conjugation conjugation_theta(const ModeMap& G, std::span<const double> xi);

// max over accepted steps with tau <= tau_max of
// |w(tau) - w(0) - xi tau / M_G|_inf, w = v + xi theta(v) / M_G.
double linear_flow_residual(const Conjugation& conj, const FieldSpec& field,
                            std::span<const double> c, double tau_max,
                            double budget);

}  // namespace homoglab
