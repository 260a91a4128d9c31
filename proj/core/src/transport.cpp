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

#include "homoglab/transport.hpp"

#include <algorithm>
#include <cmath>

#include "homoglab/error.hpp"
#include "homoglab/highdim.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/parallel.hpp"

namespace homoglab {

namespace {

int phi_slot(std::size_t n, std::size_t i) {
  return n == 1 ? kVarU : var_u(static_cast<int>(i) + 1);
}

void bind_x(std::size_t n, std::span<const double> x, double* vals) {
  for (std::size_t i = 0; i < n; ++i) vals[phi_slot(n, i)] = x[i];
  if (n == 1) vals[var_u(1)] = x[0];
}

}  // namespace

double evaluate_phi(const Expression& phi, std::span<const double> x) {
  double vals[kNumVars] = {};
  bind_x(x.size(), x, vals);
  return phi.evaluate_unchecked(vals);
}

std::vector<std::vector<double>> TransportProblem::grid_points() const {
  const std::size_t n = grid.size();
  if (n == 0 || static_cast<int>(n) != field.dimension()) {
    throw DomainError("transport grid needs one axis per field dimension");
  }
  std::size_t total = 1;
  for (const auto& ax : grid) {
    if (ax.points < 1 || !(ax.min <= ax.max)) {
      throw DomainError("bad transport grid axis");
    }
    total *= static_cast<std::size_t>(ax.points);
  }
  std::vector<std::vector<double>> pts(total, std::vector<double>(n));
  for (std::size_t f = 0; f < total; ++f) {
    std::size_t rest = f;
    for (std::size_t i = n; i-- > 0;) {
      const auto& ax = grid[i];
      auto j = static_cast<int>(rest % ax.points);
      rest /= ax.points;
      pts[f][i] = ax.points == 1
                      ? ax.min
                      : ax.min + (ax.max - ax.min) * j / (ax.points - 1);
    }
  }
  return pts;
}

double TransportProblem::validate() const {
  if (field.kind() == FieldKind::MultiScale) {
    throw DomainError("transport needs a single-scale field");
  }
  if (!(t > 0.0) || !(eps > 0.0)) throw DomainError("need t > 0, eps > 0");
  const std::size_t n = grid.size();
  std::uint32_t allowed = 0;
  for (std::size_t i = 0; i < n; ++i) allowed |= 1u << phi_slot(n, i);
  if (n == 1) allowed |= 1u << var_u(1);
  if (phi.free_vars() & ~allowed) {
    throw DomainError("phi may only use the variables u (or u1..un)");
  }
  // The max-norm Lipschitz constant is the l1 norm of the gradient.
  double lip = 0.0;
  std::vector<double> x(n);
  for (const auto& p : grid_points()) {
    double l1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double span = grid[i].max - grid[i].min;
      double h = std::max(1e-6, span * 1e-4);
      x = p;
      x[i] = p[i] + h;
      double fp = evaluate_phi(phi, x);
      x[i] = p[i] - h;
      double fm = evaluate_phi(phi, x);
      l1 += std::abs(fp - fm) / (2.0 * h);
    }
    lip = std::max(lip, l1);
  }
  if (lip > kSafetyFactor * lip_phi) {
    throw DomainError("phi has sampled Lipschitz constant " +
                      std::to_string(lip) + " above the declared " +
                      std::to_string(lip_phi));
  }
  return lip;
}

std::vector<TransportValue> solve_transport(const TransportProblem& p,
                                            double budget) {
  p.validate();
  const double eps = p.eps;
  const double sigma_end = p.t / eps;
  const int n = p.field.dimension();
  Rhs rhs = [&](double sigma, std::span<const double> y, std::span<double> dy) {
    p.field.eval_fast(sigma_end - sigma, y.data(), dy.data());
    for (int i = 0; i < n; ++i) dy[i] = -dy[i];
  };
  auto pts = p.grid_points();
  return parallel_map(pts.size(), [&](std::size_t j) {
    TransportValue v;
    v.x = pts[j];
    std::vector<double> y0(n);
    for (int i = 0; i < n; ++i) y0[i] = v.x[i] / eps;
    SolveOptions o;
    o.max_nodes = 16;
    Trajectory tr = solve(rhs, y0, sigma_end, budget / eps, o);
    v.foot.resize(n);
    for (int i = 0; i < n; ++i) v.foot[i] = eps * tr.final_state()[i];
    v.value = evaluate_phi(p.phi, v.foot);
    return v;
  });
}

double homogenized_transport(const Expression& phi,
                             std::span<const double> drift,
                             std::span<const double> x, double t) {
  if (drift.size() != x.size()) {
    throw DomainError("drift and x dimensions differ");
  }
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - drift[i] * t;
  return evaluate_phi(phi, y);
}

FieldSpec reversed_field(const FieldSpec& field) {
  if (field.kind() != FieldKind::SingleScale) {
    throw DomainError("reversed_field needs a single-scale field");
  }
  std::vector<Expression> comps;
  Expression minus_tau = -Expression::variable(kVarTau);
  for (const auto& c : field.components()) {
    comps.push_back(-c.substitute(kVarTau, minus_tau));
  }
  FieldSpec r = FieldSpec::single_scale(std::move(comps));
  r.name = field.name.empty() ? "" : field.name + "-reversed";
  r.declared_sup = field.declared_sup;
  r.declared_kappa = field.declared_kappa;
  return r;
}

EffectiveConstant transport_drift(const FieldSpec& field, double tol,
                                  double C0, bool rigorous_C0) {
  FieldSpec rev = reversed_field(field);
  EffectiveConstant e = field.dimension() == 1
                            ? effective_constant(rev, tol)
                            : rotation_vector(rev, C0, tol, rigorous_C0);
  for (double& v : e.value) v = -v;
  return e;
}

double characteristic_round_trip(const TransportProblem& p,
                                 const TransportValue& v, double budget) {
  const double eps = p.eps;
  const int n = p.field.dimension();
  std::vector<double> y0(n);
  for (int i = 0; i < n; ++i) y0[i] = v.foot[i] / eps;
  SolveOptions o;
  o.max_nodes = 16;
  Trajectory tr = solve_rescaled(p.field, y0, p.t / eps, budget / eps, o);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(eps * tr.final_state()[i] - v.x[i]));
  }
  return worst;
}

}  // namespace homoglab
