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

#include "homoglab/effective.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <mutex>
#include <string>

#include "homoglab/error.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/parallel.hpp"
#include "homoglab/quadrature.hpp"

namespace homoglab {

std::string_view to_string(EffectiveMethod m) {
  switch (m) {
    case EffectiveMethod::LongTimeAverage: return "long-time-average";
    case EffectiveMethod::HarmonicMean: return "harmonic-mean";
    case EffectiveMethod::Equilibrium: return "equilibrium";
  }
  return "?";
}

namespace {

void require_scalar_single(const FieldSpec& field, const char* what) {
  if (field.kind() != FieldKind::SingleScale || field.dimension() != 1) {
    throw DomainError(std::string(what) +
                      " needs a scalar single-scale field");
  }
}

double scaled_sup(const FieldSpec& field) {
  auto s = estimate_sup_norm(field, 64);
  return s.declared ? s.max() : kSafetyFactor * s.max();
}

double v_at(const FieldSpec& field, double c, double tau, double budget) {
  if (tau == 0.0) return c;
  SolveOptions o;
  o.max_nodes = 16;
  double c0[1] = {c};
  return solve_rescaled(field, c0, tau, budget, o).final_state()[0];
}

EffectiveConstant long_time_average(const FieldSpec& field, double tol,
                                    const EffectiveOptions& opts) {
  double A = 1.0 + 2.0 * scaled_sup(field);
  double Kd = std::ceil(A / tol);
  if (Kd > static_cast<double>(opts.max_K)) {
    throw IntegrationError(
        "long-time average needs K=" + std::to_string(Kd) +
        " which exceeds the cap; loosen tol, or use the harmonic-mean method "
        "for autonomous fields of one sign");
  }
  auto K = static_cast<std::int64_t>(Kd);
  double budget = tol * Kd / 10.0;
  double vK = v_at(field, 0.0, Kd, budget);
  EffectiveConstant e;
  e.value = {vK / Kd};
  e.error_bar = {A / Kd + budget / Kd};
  e.K = K;
  e.method = EffectiveMethod::LongTimeAverage;
  return e;
}

}  // namespace

EffectiveConstant effective_constant(const FieldSpec& field, double tol,
                                     const EffectiveOptions& opts) {
  require_scalar_single(field, "effective_constant");
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  if (opts.shortcuts && field.autonomous()) {
    const Expression& e = field.components()[0];
    double vals[kNumVars] = {};
    auto f = [&](double r) {
      vals[kVarR] = r;
      vals[var_r(1)] = r;
      return e.evaluate_unchecked(vals);
    };
    double lo = INFINITY;
    double hi = -INFINITY;
    double inv_sum = 0.0;
    for (int j = 0; j < opts.sample_grid; ++j) {
      double x = f(static_cast<double>(j) / opts.sample_grid);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      inv_sum += 1.0 / x;
    }
    if (lo <= 0.0 && hi >= 0.0) {
      EffectiveConstant c;
      c.value = {0.0};
      c.error_bar = {DBL_EPSILON};
      c.method = EffectiveMethod::Equilibrium;
      return c;
    }
    double rough = std::abs(inv_sum / opts.sample_grid);
    try {
      auto q = integrate_adaptive([&](double r) { return 1.0 / f(r); }, 0.0,
                                  1.0, 0.5 * tol * rough * rough);
      double I = std::abs(q.value);
      if (q.error < 0.5 * I) {
        EffectiveConstant c;
        c.value = {1.0 / q.value};
        c.error_bar = {std::max(q.error / (I * (I - q.error)),
                                DBL_EPSILON * std::abs(1.0 / q.value))};
        c.method = EffectiveMethod::HarmonicMean;
        c.rigorous = false;
        return c;
      }
    } catch (const IntegrationError&) {
      // fall through to the long-time average
    }
  }
  return long_time_average(field, tol, opts);
}

double lambert_w(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw DomainError("lambert_w needs a finite x >= 0");
  }
  if (x == 0.0) return 0.0;
  // log(1+x) >= W(x), and Newton on the convex w e^w - x decreases
  // monotonically from above.
  double w = std::log1p(x);
  for (int i = 0; i < 100; ++i) {
    double ew = std::exp(w);
    double d = (w * ew - x) / (ew * (w + 1.0));
    w -= d;
    if (std::abs(d) <= 4.0 * DBL_EPSILON * std::max(1.0, std::abs(w))) break;
  }
  return w;
}

double modulus_bound(double kappa, double delta) {
  if (!(kappa > 0.0) || !(delta > 0.0) || !std::isfinite(kappa) ||
      !std::isfinite(delta)) {
    throw DomainError("modulus_bound needs kappa > 0 and delta > 0");
  }
  double q = lambert_w(1.0 / delta) / kappa;
  // Values a few ulps below an integer count as that integer.
  double fl = std::floor(q * (1.0 + 8.0 * DBL_EPSILON));
  if (fl <= 0.0) return INFINITY;
  return 2.0 / fl;
}

FieldSpec freeze(const FieldSpec& field, double u0, double t0) {
  if (field.kind() != FieldKind::MultiScale) {
    throw DomainError("freeze needs a multi-scale field");
  }
  Expression e = field.components()[0]
                     .substitute(kVarU, Expression::constant(u0))
                     .substitute(var_u(1), Expression::constant(u0))
                     .substitute(kVarT, Expression::constant(t0));
  FieldSpec f = FieldSpec::single_scale({e});
  f.name = field.name;
  f.declared_kappa = field.declared_kappa;
  f.declared_sup = field.declared_sup;
  return f;
}

EffectiveConstant effective_field(const FieldSpec& field, double u0,
                                  double t0, double tol,
                                  const EffectiveOptions& opts) {
  const UTBox& b = field.box();
  if (u0 < b.u_lo || u0 > b.u_hi || t0 < b.t_lo || t0 > b.t_hi) {
    throw DomainError("(u0, t0) = (" + std::to_string(u0) + ", " +
                      std::to_string(t0) + ") is outside the sampling box");
  }
  return effective_constant(freeze(field, u0, t0), tol, opts);
}

bool EffectiveMemo::lookup(std::int64_t ku, std::int64_t kt,
                           double* value) const {
  std::shared_lock lock(mu_);
  auto it = map_.find({ku, kt});
  if (it == map_.end()) return false;
  *value = it->second;
  return true;
}

void EffectiveMemo::store(std::int64_t ku, std::int64_t kt, double value) {
  std::unique_lock lock(mu_);
  map_[{ku, kt}] = value;
}

std::size_t EffectiveMemo::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

double EffectivePath::value(double time) const {
  if (t.empty() || time < t.front() || time > t.back() || std::isnan(time)) {
    throw DomainError("effective path query outside its time range");
  }
  auto it = std::upper_bound(t.begin(), t.end(), time);
  std::size_t j = static_cast<std::size_t>(it - t.begin());
  if (j >= t.size()) return u.back();
  std::size_t i = j - 1;
  double s = (time - t[i]) / (t[j] - t[i]);
  return u[i] + s * (u[j] - u[i]);
}

EffectivePath solve_effective(const EffectiveFn& fbar, double c, double T,
                              double h, const EffectiveSolveOptions& opts) {
  if (!(h > 0.0) || !(T > 0.0)) throw DomainError("need h > 0 and T > 0");
  if (!(opts.sup_norm >= 0.0) || !(opts.key_resolution > 0.0)) {
    throw DomainError("solve_effective needs sup_norm and key_resolution");
  }
  EffectiveMemo local;
  EffectiveMemo& memo = opts.memo ? *opts.memo : local;
  EffectivePath path;
  const double res = opts.key_resolution;

  auto eval = [&](double u, double t) {
    auto ku = static_cast<std::int64_t>(std::llround(u / res));
    auto kt = opts.time_independent
                  ? std::int64_t{0}
                  : static_cast<std::int64_t>(std::llround(t / res));
    double v = 0.0;
    if (memo.lookup(ku, kt, &v)) {
      ++path.memo_hits;
      return v;
    }
    double tq = opts.time_independent ? t : static_cast<double>(kt) * res;
    v = fbar(static_cast<double>(ku) * res, tq).scalar();
    ++path.evaluations;
    memo.store(ku, kt, v);
    return v;
  };

  double u = c;
  double t = 0.0;
  path.t.push_back(t);
  path.u.push_back(u);
  auto steps = static_cast<std::int64_t>(std::ceil(T / h - 1e-9));
  for (std::int64_t k = 1; k <= steps; ++k) {
    double t1 = std::min(T, static_cast<double>(k) * h);
    double hk = t1 - t;
    double width = hk * opts.sup_norm + 2.0 * res;
    double lo = u - width;
    double hi = u + width;
    double f_lo = eval(lo, t1);
    double f_hi = eval(hi, t1);
    double g_lo = lo - u - hk * f_lo;
    double g_hi = hi - u - hk * f_hi;
    if (g_lo > 0.0 || g_hi < 0.0) {
      throw MonotonicityError(
          "implicit Euler bracket failed at t=" + std::to_string(t1) +
          "; f-bar exceeds its sup bound or is not non-increasing in u");
    }
    if (f_hi > f_lo + opts.monotonicity_slack) {
      throw MonotonicityError("f-bar increases in u between " +
                              std::to_string(lo) + " and " +
                              std::to_string(hi) + " at t=" +
                              std::to_string(t1));
    }
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid))) break;
      double g = mid - u - hk * eval(mid, t1);
      if (g < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    u = 0.5 * (lo + hi);
    t = t1;
    path.t.push_back(t);
    path.u.push_back(u);
  }
  return path;
}

double subadditivity_defect(const FieldSpec& field, double sigma, double l,
                            double t, double c, double budget) {
  require_scalar_single(field, "subadditivity_defect");
  if (!(sigma > 0.0) || !(l > 0.0) || !(t > 0.0)) {
    throw DomainError("sigma, l and t must be positive");
  }
  double a = v_at(field, (sigma + l) * c, (sigma + l) * t, budget);
  double b = v_at(field, sigma * c, sigma * t, budget);
  double d = v_at(field, l * c, l * t, budget);
  return a - b - d;
}

Oscillation oscillation(const FieldSpec& field, double tau, int grid,
                        double budget) {
  require_scalar_single(field, "oscillation");
  if (!(tau > 0.0) || grid < 32) {
    throw DomainError("oscillation needs tau > 0 and grid >= 32");
  }
  auto d = parallel_map(static_cast<std::size_t>(grid), [&](std::size_t j) {
    double c = static_cast<double>(j) / grid;
    return v_at(field, c, tau, budget) - c;
  });
  Oscillation o;
  o.M = *std::max_element(d.begin(), d.end());
  o.m = *std::min_element(d.begin(), d.end());
  return o;
}

}  // namespace homoglab
