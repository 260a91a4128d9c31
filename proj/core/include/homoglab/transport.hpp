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
#include "homoglab/expr.hpp"
#include "homoglab/fields.hpp"

namespace homoglab {

struct GridAxis {
  double min = 0.0;
  double max = 1.0;
  int points = 2;
};

// V_t + f(x/eps, t/eps) . DV = 0, V(x, 0) = phi(x). phi is an expression
// in u (n = 1) or u1..un; lip_phi is its Lipschitz constant for the max
// norm on x.
struct TransportProblem {
  FieldSpec field;
  Expression phi;
  double lip_phi = 1.0;
  std::vector<GridAxis> grid;
  double t = 1.0;
  double eps = 0.1;

  // Tensor grid, last axis fastest.
  std::vector<std::vector<double>> grid_points() const;
  // Sampled max-norm Lipschitz constant of phi on the grid window; throws
  // DomainError if it exceeds 1.05 lip_phi.
  double validate() const;
};

double evaluate_phi(const Expression& phi, std::span<const double> x);

struct TransportValue {
  std::vector<double> x;
  std::vector<double> foot;  // z(t) of the backward characteristic
  double value = 0.0;        // phi(foot)
};

// Backward characteristics z' = -f(z/eps, (t-s)/eps), z(0) = x, integrated
// in fast time with budget / eps; V(x, t) = phi(z(t)).
std::vector<TransportValue> solve_transport(const TransportProblem& p,
                                            double budget);

// phi(x - drift t).
double homogenized_transport(const Expression& phi,
                             std::span<const double> drift,
                             std::span<const double> x, double t);

// The field (r, tau) -> -f(r, -tau).
FieldSpec reversed_field(const FieldSpec& field);

// Forward drift: minus the rotation vector of the reversed field, so that
// V(x, t) ~ phi(x - drift t). C0 is used for n >= 2.
EffectiveConstant transport_drift(const FieldSpec& field, double tol,
                                  double C0 = 0.0, bool rigorous_C0 = false);

// Re-solves forward from the foot point and returns |x_back - x|_inf.
double characteristic_round_trip(const TransportProblem& p,
                                 const TransportValue& v, double budget);

}  // namespace homoglab
