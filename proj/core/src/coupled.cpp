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

#include "homoglab/coupled.hpp"

#include <algorithm>
#include <cmath>

#include "homoglab/error.hpp"
#include "homoglab/quadrature.hpp"

namespace homoglab {

namespace {

double eval_t(const Expression& e, double t) {
  double vals[kNumVars] = {};
  vals[kVarT] = t;
  return e.evaluate_unchecked(vals);
}

void check_periodic_in_t(const Expression& e) {
  std::uint32_t other = e.free_vars() & ~(1u << kVarT);
  if (other) {
    throw DomainError("coupled inputs may only use the variable t: '" +
                      e.source() + "'");
  }
  if (!e.depends_on(kVarT)) return;
  auto rep = check_periodicity(e, kVarT, 512);
  if (rep.max_deviation > 1e-9) {
    throw DomainError("coupled input '" + e.source() + "' is not 1-periodic");
  }
}

}  // namespace

CoupledSpec CoupledSpec::make(double a1, double a2, Expression f1,
                              Expression f2, double c1, double c2) {
  if (!(a1 > 0.0) || !(a2 > 0.0)) {
    throw DomainError("switching rates must be positive");
  }
  check_periodic_in_t(f1);
  check_periodic_in_t(f2);
  CoupledSpec s;
  s.a1 = a1;
  s.a2 = a2;
  s.f1 = std::move(f1);
  s.f2 = std::move(f2);
  s.c1 = c1;
  s.c2 = c2;
  s.fbar1 = integrate_adaptive([&](double t) { return eval_t(s.f1, t); }, 0.0,
                               1.0, 1e-12)
                .value;
  s.fbar2 = integrate_adaptive([&](double t) { return eval_t(s.f2, t); }, 0.0,
                               1.0, 1e-12)
                .value;
  for (int j = 0; j < 4096; ++j) {
    double t = j / 4096.0;
    s.sup1 = std::max(s.sup1, std::abs(eval_t(s.f1, t)));
    s.sup2 = std::max(s.sup2, std::abs(eval_t(s.f2, t)));
  }
  return s;
}

CoupledSolution solve_coupled(const CoupledSpec& spec, double eps, double T,
                              double budget) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("eps must be in (0, 1]");
  if (!(T > 0.0) || !(budget > 0.0)) {
    throw DomainError("need T > 0 and budget > 0");
  }
  const double a1 = spec.a1;
  const double a2 = spec.a2;
  const double sa = a1 + a2;
  const double lambda = sa / eps;
  const auto N = static_cast<std::size_t>(std::ceil(T / (0.1 * eps)));
  const double h = T / static_cast<double>(N);
  const double decay = std::exp(-lambda * h);
  // Per-interval tolerance so that the accumulated error in u stays within
  // budget: z enters with weight 1/sa and d with max(a1,a2)/sa <= 1.
  const double tol = budget / (2.0 * static_cast<double>(N));

  auto src_z = [&](double s) {
    return a2 * eval_t(spec.f1, s / eps) + a1 * eval_t(spec.f2, s / eps);
  };
  auto src_d = [&](double s) {
    return eval_t(spec.f1, s / eps) - eval_t(spec.f2, s / eps);
  };

  CoupledSolution sol{Trajectory(1), Trajectory(1), {}};
  sol.z.reserve(N + 1);
  double z = a2 * spec.c1 + a1 * spec.c2;
  double d = spec.c1 - spec.c2;
  auto push = [&](double t) {
    double u1 = (z + a1 * d) / sa;
    double u2 = (z - a2 * d) / sa;
    double du1 = -a1 / eps * (u1 - u2) + eval_t(spec.f1, t / eps);
    double du2 = -a2 / eps * (u2 - u1) + eval_t(spec.f2, t / eps);
    sol.u1.push(t, std::span<const double>(&u1, 1),
                std::span<const double>(&du1, 1));
    sol.u2.push(t, std::span<const double>(&u2, 1),
                std::span<const double>(&du2, 1));
    sol.z.push_back(z);
  };
  push(0.0);
  for (std::size_t k = 0; k < N; ++k) {
    double t0 = static_cast<double>(k) * h;
    double t1 = k + 1 == N ? T : static_cast<double>(k + 1) * h;
    z += integrate_adaptive(src_z, t0, t1, tol * sa).value;
    double kernel = integrate_adaptive(
                        [&](double s) {
                          return std::exp(-lambda * (t1 - s)) * src_d(s);
                        },
                        t0, t1, tol)
                        .value;
    d = decay * d + kernel;
    if (!std::isfinite(z) || !std::isfinite(d)) {
      throw IntegrationError("non-finite state in the coupled solver");
    }
    push(t1);
  }
  sol.u1.error_budget = budget;
  sol.u2.error_budget = budget;
  sol.u1.stats.steps = sol.u2.stats.steps = N;
  return sol;
}

double explicit_limit(const CoupledSpec& spec, double eps, double t, int i) {
  if (i != 1 && i != 2) throw DomainError("component index must be 1 or 2");
  const double sa = spec.a1 + spec.a2;
  double base = (spec.c1 * spec.a2 + spec.c2 * spec.a1) / sa +
                (spec.a2 * spec.fbar1 + spec.a1 * spec.fbar2) / sa * t;
  double ai = i == 1 ? spec.a1 : spec.a2;
  double gap = i == 1 ? spec.c1 - spec.c2 : spec.c2 - spec.c1;
  return base + ai * gap / sa * std::exp(-sa * t / eps);
}

double coupled_bound_constant(const CoupledSpec& spec, int i) {
  if (i != 1 && i != 2) throw DomainError("component index must be 1 or 2");
  const double sa = spec.a1 + spec.a2;
  double ai = i == 1 ? spec.a1 : spec.a2;
  return (2.0 * spec.a2 * sa + ai) / (sa * sa) * spec.sup1 +
         (2.0 * spec.a1 * sa + ai) / (sa * sa) * spec.sup2;
}

}  // namespace homoglab
