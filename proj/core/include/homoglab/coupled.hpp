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

#include "homoglab/expr.hpp"
#include "homoglab/integrate.hpp"

namespace homoglab {

// u1' = -(a1/eps)(u1 - u2) + f1(t/eps), u2' = -(a2/eps)(u2 - u1) + f2(t/eps),
// with f1, f2 1-periodic expressions in the variable t.
struct CoupledSpec {
  double a1 = 1.0;
  double a2 = 1.0;
  Expression f1;
  Expression f2;
  double c1 = 0.0;
  double c2 = 0.0;
  double fbar1 = 0.0;  // period averages
  double fbar2 = 0.0;
  double sup1 = 0.0;  // sampled sup norms
  double sup2 = 0.0;

  // Validates the rates and periodicity and fills averages and sup norms.
  static CoupledSpec make(double a1, double a2, Expression f1, Expression f2,
                          double c1, double c2);
};

struct CoupledSolution {
  Trajectory u1;
  Trajectory u2;
  // a2 u1 + a1 u2 from direct quadrature, one entry per node.
  std::vector<double> z;
};

// Integrates z = a2 u1 + a1 u2 by quadrature and d = u1 - u2 by the exact
// integrating factor on a node grid of spacing at most 0.1 eps:
//   d_{k+1} = exp(-lambda h) d_k + int exp(-lambda (t_{k+1} - s)) (f1-f2)(s/eps) ds
// with lambda = (a1 + a2) / eps. No step is limited by stiffness.
CoupledSolution solve_coupled(const CoupledSpec& spec, double eps, double T,
                              double budget);

// m_i(t), i in {1, 2}.
double explicit_limit(const CoupledSpec& spec, double eps, double t, int i);

double coupled_bound_constant(const CoupledSpec& spec, int i);

}  // namespace homoglab
