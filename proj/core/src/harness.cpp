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

#include "homoglab/harness.hpp"

#include <algorithm>
#include <cmath>

#include "homoglab/catalog.hpp"
#include "homoglab/coupled.hpp"
#include "homoglab/effective.hpp"
#include "homoglab/error.hpp"
#include "homoglab/highdim.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/parallel.hpp"
#include "homoglab/quasiperiodic.hpp"
#include "homoglab/transport.hpp"

namespace homoglab {

RateFit fit_rate(const std::vector<std::pair<double, double>>& points,
                 double floor) {
  if (points.size() < 3) {
    throw DomainError("fit_rate needs at least 3 points, got " +
                      std::to_string(points.size()));
  }
  RateFit fit;
  fit.points = points.size();
  std::vector<double> x, y;
  for (const auto& [eps, err] : points) {
    if (!(eps > 0.0)) throw DomainError("fit_rate needs eps > 0");
    double e = err;
    if (!(e > 0.0)) {
      e = floor;
      fit.floored = true;
    }
    x.push_back(std::log(eps));
    y.push_back(std::log(e));
  }
  double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_rate needs distinct eps values");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double SweepTable::max_ratio() const {
  double m = 0.0;
  for (const auto& r : rows) m = std::max(m, r.ratio);
  return m;
}

CsvTable SweepTable::csv() const {
  CsvTable t({"scenario", "epsilon", "horizon", "sup_error", "theory_bound",
              "ratio"});
  for (const auto& r : rows) {
    t.add_row({scenario, format_number(r.eps), format_number(r.horizon),
               format_number(r.sup_error), format_number(r.theory_bound),
               format_number(r.ratio)});
  }
  return t;
}

double drift_error(const FieldSpec& field, double eps,
                   std::span<const double> c, std::span<const double> drift,
                   double T, double budget) {
  if (c.size() != drift.size() ||
      static_cast<int>(c.size()) != field.dimension()) {
    throw DomainError("drift_error: dimension mismatch");
  }
  double worst = 0.0;
  SolveOptions o;
  o.max_nodes = 1024;
  o.observer = [&](double t, std::span<const double> u) {
    for (std::size_t i = 0; i < u.size(); ++i) {
      worst = std::max(worst, std::abs(u[i] - (c[i] + drift[i] * t)));
    }
  };
  solve_fast(field, eps, c, T, budget, o);
  return worst;
}

std::vector<std::string> sweep_scenarios() {
  return {"harmonic",     "sharpness",    "qp-cosine",
          "shear-golden", "coupled-sine", "transport-harmonic",
          "transport-shear"};
}

namespace {

CoupledSpec coupled_sine() {
  return CoupledSpec::make(2.0, 3.0, parse("sin(2*pi*t)"), parse("0"), 1.0,
                           0.0);
}

TransportProblem transport_problem(std::string_view scenario, double eps,
                                   double t) {
  TransportProblem p;
  p.t = t;
  p.eps = eps;
  if (scenario == "transport-harmonic") {
    p.field = catalog("harmonic").field;
    p.phi = parse("u");
    p.lip_phi = 1.0;
    p.grid = {{-1.0, 1.0, 64}};
  } else {
    p.field = catalog("shear-golden").field;
    p.phi = parse("u1 + u2");
    // |x1 + x2 - y1 - y2| <= 2 max_i |x_i - y_i|.
    p.lip_phi = 2.0;
    p.grid = {{0.0, 1.0, 16}, {0.0, 1.0, 16}};
  }
  return p;
}

SweepRow sweep_row(std::string_view scenario, double eps, double T,
                   double budget) {
  SweepRow row;
  row.eps = eps;
  row.horizon = T;
  if (scenario == "harmonic" || scenario == "sharpness") {
    Scenario s = catalog(scenario);
    row.sup_error =
        drift_error(s.field, eps, std::vector<double>{0.0},
                        std::vector<double>{*s.expected_fbar}, T, budget);
    double sup = estimate_sup_norm(s.field, 64).max();
    // Autonomous fields have the sharp constant 1.
    row.theory_bound = scenario == "harmonic" ? eps : (1.0 + 2.0 * sup) * eps;
  } else if (scenario == "qp-cosine") {
    Scenario s = catalog(scenario);
    double speed = effective_speed(*s.field.qp(), 1e-12).scalar();
    row.sup_error = drift_error(s.field, eps, std::vector<double>{0.0},
                                std::vector<double>{speed}, T, budget);
    row.theory_bound = eps;
  } else if (scenario == "shear-golden") {
    Scenario s = catalog(scenario);
    auto conj = conjugation_theta(golden_shear_profile(), golden_frequency());
    row.sup_error = drift_error(s.field, eps, std::vector<double>{0.0, 0.0},
                                s.expected_vector,
                                T, budget);
    row.theory_bound = conj.c0_bound() * eps + eps;
  } else if (scenario == "coupled-sine") {
    CoupledSpec spec = coupled_sine();
    CoupledSolution sol = solve_coupled(spec, eps, T, budget);
    for (std::size_t k = 0; k < sol.u1.size(); ++k) {
      double t = sol.u1.time(k);
      row.sup_error = std::max(
          {row.sup_error,
           std::abs(sol.u1.state(k)[0] - explicit_limit(spec, eps, t, 1)),
           std::abs(sol.u2.state(k)[0] - explicit_limit(spec, eps, t, 2))});
    }
    row.theory_bound = std::min(coupled_bound_constant(spec, 1),
                                coupled_bound_constant(spec, 2)) *
                       eps;
  } else if (scenario == "transport-harmonic" ||
             scenario == "transport-shear") {
    TransportProblem p = transport_problem(scenario, eps, T);
    std::vector<double> drift;
    double constant = 1.0;
    if (scenario == "transport-harmonic") {
      drift = {std::sqrt(3.0)};
    } else {
      auto xi = golden_frequency();
      drift = {xi[0] / 2.0, xi[1] / 2.0};
      constant =
          conjugation_theta(golden_shear_profile(), xi).c0_bound() + 1.0;
    }
    for (const auto& v : solve_transport(p, budget)) {
      double hom = homogenized_transport(p.phi, drift, v.x, p.t);
      row.sup_error = std::max(row.sup_error, std::abs(v.value - hom));
    }
    row.theory_bound = constant * eps;
  } else {
    std::string names;
    for (const auto& n : sweep_scenarios()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw DomainError("unknown sweep scenario '" + std::string(scenario) +
                      "'; available: " + names);
  }
  row.ratio = row.sup_error / row.theory_bound;
  return row;
}

}  // namespace

SweepTable sweep(std::string_view scenario, const std::vector<double>& eps_list,
                 double T, double budget) {
  if (eps_list.size() < 3) {
    throw DomainError("a sweep needs at least 3 eps values");
  }
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0) || eps_list[i] > 1.0 ||
        (i && !(eps_list[i] < eps_list[i - 1]))) {
      throw DomainError("eps values must be descending and in (0, 1]");
    }
  }
  if (!(budget > 0.0)) budget = 0.01 * eps_list.back();
  SweepTable table;
  table.scenario = std::string(scenario);
  try {
    table.rows = parallel_map(eps_list.size(), [&](std::size_t j) {
      return sweep_row(scenario, eps_list[j], T, budget);
    });
  } catch (const DomainError&) {
    throw;
  } catch (const Error& e) {
    table.valid = false;
    table.note = e.what();
    return table;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : table.rows) pts.emplace_back(r.eps, r.sup_error);
  table.fit = fit_rate(pts, budget);
  if (table.fit.floored) table.note = "errors at the budget floor";
  return table;
}

double sharpness_witness(double eps, double budget) {
  Scenario s = catalog("sharpness");
  double ts = eps * std::abs(std::log(eps));
  double c0[1] = {0.0};
  SolveOptions o;
  o.max_nodes = 16;
  Trajectory tr = solve_fast(s.field, eps, c0, ts, budget, o);
  return std::abs(tr.final_state()[0] + ts);
}

MultiscaleReport verify_multiscale(const FieldSpec& field, double c, double T,
                                   const std::vector<double>& eps_list,
                                   double tol, double budget) {
  if (field.kind() != FieldKind::MultiScale) {
    throw DomainError("verify_multiscale needs a multi-scale field");
  }
  if (eps_list.empty()) throw DomainError("empty eps list");
  field.validate();
  MultiscaleReport rep;
  double sup = estimate_sup_norm(field, 64).max();
  rep.sup_norm = sup;
  rep.kappa = estimate_lipschitz(field, 64).value;
  double sup_safe = kSafetyFactor * sup;
  double eps_min = *std::min_element(eps_list.begin(), eps_list.end());
  rep.effective_h = eps_min / 10.0;

  EffectiveSolveOptions eo;
  eo.sup_norm = sup_safe;
  eo.key_resolution = tol / 10.0;
  eo.time_independent = !field.components()[0].depends_on(kVarT);
  eo.monotonicity_slack = 2.0 * tol;
  EffectiveFn fbar = [&](double u, double t) {
    return effective_field(field, u, t, tol);
  };
  EffectivePath ubar = solve_effective(fbar, c, T, rep.effective_h, eo);
  rep.fbar_evaluations = ubar.evaluations;

  struct Partial {
    MultiscaleRow row;
    std::vector<std::pair<double, double>> early;  // (t, err), t <= cutoff
  };
  auto parts = parallel_map(eps_list.size(), [&](std::size_t j) {
    Partial p;
    double eps = eps_list[j];
    double L = std::abs(std::log(eps));
    p.row.eps = eps;
    p.row.cutoff = eps * L;
    p.row.short_excess = -INFINITY;
    SolveOptions o;
    o.max_nodes = 1024;
    o.observer = [&](double t, std::span<const double> u) {
      double err = std::abs(u[0] - ubar.value(t));
      if (t > p.row.cutoff) {
        p.row.long_normalized = std::max(p.row.long_normalized, err * L / t);
      } else {
        p.row.short_normalized = std::max(p.row.short_normalized, err / eps);
        p.row.short_excess =
            std::max(p.row.short_excess, err - 2.0 * sup_safe * t - budget);
        p.early.emplace_back(t, err);
      }
    };
    double c0[1] = {c};
    solve_fast(field, eps, c0, T, budget, o);
    p.row.constant = std::max(p.row.long_normalized, p.row.short_normalized);
    return p;
  });

  double lmin = INFINITY, lmax = 0.0, cmin = INFINITY, cmax = 0.0;
  for (const auto& p : parts) {
    lmin = std::min(lmin, p.row.long_normalized);
    lmax = std::max(lmax, p.row.long_normalized);
    cmin = std::min(cmin, p.row.constant);
    cmax = std::max(cmax, p.row.constant);
  }
  rep.C_emp = cmax;
  rep.long_stability = lmin > 0.0 ? lmax / lmin : INFINITY;
  rep.constant_stability = cmin > 0.0 ? cmax / cmin : INFINITY;
  for (auto& p : parts) {
    p.row.short_excess_min = -INFINITY;
    for (const auto& [t, err] : p.early) {
      double bound = std::min(rep.C_emp * p.row.eps, 2.0 * sup_safe * t);
      p.row.short_excess_min =
          std::max(p.row.short_excess_min, err - bound - budget);
    }
    rep.rows.push_back(p.row);
  }
  return rep;
}

}  // namespace homoglab
