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

#include "homoglab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "homoglab/error.hpp"

namespace homoglab {

double dyadic_floor(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("dyadic_floor needs a positive finite argument");
  }
  int e = 0;
  std::frexp(x, &e);  // x = m 2^e, m in [0.5, 1)
  return std::ldexp(1.0, e - 1);
}

void Trajectory::push(double t, std::span<const double> y,
                      std::span<const double> dy) {
  t_.push_back(t);
  y_.insert(y_.end(), y.begin(), y.end());
  dy_.insert(dy_.end(), dy.begin(), dy.end());
}

void Trajectory::thin() {
  std::size_t m = size();
  if (m < 3) return;
  std::size_t w = 0;
  for (std::size_t i = 0; i < m; i += 2, ++w) {
    t_[w] = t_[i];
    std::copy_n(y_.begin() + i * dim_, dim_, y_.begin() + w * dim_);
    std::copy_n(dy_.begin() + i * dim_, dim_, dy_.begin() + w * dim_);
  }
  if ((m - 1) % 2 != 0) {
    t_[w] = t_[m - 1];
    std::copy_n(y_.begin() + (m - 1) * dim_, dim_, y_.begin() + w * dim_);
    std::copy_n(dy_.begin() + (m - 1) * dim_, dim_, dy_.begin() + w * dim_);
    ++w;
  }
  t_.resize(w);
  y_.resize(w * dim_);
  dy_.resize(w * dim_);
}

void Trajectory::query(double t, std::span<double> out) const {
  if (t_.empty() || t < t_.front() || t > t_.back() || std::isnan(t)) {
    throw DomainError("trajectory query at t=" + std::to_string(t) +
                      " outside [" + std::to_string(t_.front()) + ", " +
                      std::to_string(t_.back()) + "]");
  }
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t j = static_cast<std::size_t>(it - t_.begin());
  if (j >= t_.size()) j = t_.size() - 1;
  std::size_t i = j - 1;
  double h = t_[j] - t_[i];
  double s = (t - t_[i]) / h;
  double s2 = s * s;
  double s3 = s2 * s;
  double h00 = 2 * s3 - 3 * s2 + 1;
  double h10 = s3 - 2 * s2 + s;
  double h01 = -2 * s3 + 3 * s2;
  double h11 = s3 - s2;
  for (int k = 0; k < dim_; ++k) {
    out[k] = h00 * y_[i * dim_ + k] + h10 * h * dy_[i * dim_ + k] +
             h01 * y_[j * dim_ + k] + h11 * h * dy_[j * dim_ + k];
  }
}

double Trajectory::query(double t, int component) const {
  std::vector<double> out(dim_);
  query(t, out);
  return out[component];
}

Trajectory Trajectory::rescaled(double time_scale, double state_scale) const {
  Trajectory r(dim_);
  r.t_.resize(t_.size());
  r.y_.resize(y_.size());
  r.dy_.resize(dy_.size());
  double dscale = state_scale / time_scale;
  for (std::size_t i = 0; i < t_.size(); ++i) r.t_[i] = t_[i] * time_scale;
  for (std::size_t i = 0; i < y_.size(); ++i) {
    r.y_[i] = y_[i] * state_scale;
    r.dy_[i] = dy_[i] * dscale;
  }
  r.error_budget = error_budget * state_scale;
  r.stats = stats;
  return r;
}

Trajectory solve(const Rhs& rhs, std::span<const double> c, double T,
                 double budget, const SolveOptions& opts) {
  if (!(budget > 0.0)) throw DomainError("budget must be positive");
  if (!(T > 0.0) || !std::isfinite(T)) {
    throw DomainError("horizon must be positive and finite");
  }
  const int n = static_cast<int>(c.size());
  const std::size_t nn = c.size();
  const double h_max = dyadic_floor(opts.h_max);
  const double rate = budget / T;
  const double h_min = 1e-14 * T;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  Trajectory traj(n);
  traj.error_budget = budget;
  SolveStats& st = traj.stats;

  std::vector<double> y(c.begin(), c.end());
  std::vector<double> f0(nn), k2(nn), k3(nn), k4(nn), tmp(nn);
  std::vector<double> y_full(nn), y_mid(nn), y_half(nn), fm(nn), y_new(nn),
      f_new(nn);

  auto eval = [&](double t, const std::vector<double>& x,
                  std::vector<double>& out) {
    rhs(t, x, out);
    ++st.evals;
  };
  // One RK4 step from (t, x) with initial slope k1.
  auto rk4 = [&](double t, const std::vector<double>& x,
                 const std::vector<double>& k1, double h,
                 std::vector<double>& out) {
    for (std::size_t i = 0; i < nn; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    eval(t + 0.5 * h, tmp, k2);
    for (std::size_t i = 0; i < nn; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    eval(t + 0.5 * h, tmp, k3);
    for (std::size_t i = 0; i < nn; ++i) tmp[i] = x[i] + h * k3[i];
    eval(t + h, tmp, k4);
    for (std::size_t i = 0; i < nn; ++i) {
      out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  };

  double t = 0.0;
  eval(t, y, f0);
  traj.push(t, y, f0);
  if (opts.observer) opts.observer(t, y);

  std::size_t stride = 1;
  double h = h_max;
  while (t < T) {
    bool last = false;
    double step = h;
    if (t + step >= T) {
      step = T - t;
      last = true;
    }
    rk4(t, y, f0, step, y_full);
    rk4(t, y, f0, 0.5 * step, y_mid);
    eval(t + 0.5 * step, y_mid, fm);
    rk4(t + 0.5 * step, y_mid, fm, 0.5 * step, y_half);
    double err = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      // Differences within a few ulps of the state are rounding, not
      // truncation; counting them ratchets h down once rate * h < ulp.
      double noise = 4.0 * kEps * std::max(std::abs(y_half[i]), std::abs(y[i]));
      double d = std::abs(y_half[i] - y_full[i]) - noise;
      err = std::max(err, d / 15.0);
    }
    if (!(err <= rate * step)) {
      if (std::isnan(err)) {
        throw IntegrationError("non-finite state at t=" + std::to_string(t));
      }
      ++st.rejected;
      h = 0.5 * std::min(h, dyadic_floor(step));
      if (h < h_min) {
        throw IntegrationError("step size underflow at t=" +
                               std::to_string(t) +
                               " (stiff or singular right-hand side)");
      }
      continue;
    }
    for (std::size_t i = 0; i < nn; ++i) {
      y_new[i] = y_half[i] + (y_half[i] - y_full[i]) / 15.0;
      if (!std::isfinite(y_new[i])) {
        throw IntegrationError("non-finite state at t=" + std::to_string(t));
      }
    }
    double t_new = last ? T : t + step;
    eval(t_new, y_new, f_new);
    t = t_new;
    y.swap(y_new);
    f0.swap(f_new);
    ++st.steps;
    if (opts.observer) opts.observer(t, y);
    if (last || st.steps % stride == 0) {
      traj.push(t, y, f0);
      if (traj.size() > opts.max_nodes) {
        traj.thin();
        stride *= 2;
      }
    }
    if (err <= rate * step / 32.0 && 2.0 * h <= h_max &&
        std::fmod(t, 2.0 * h) == 0.0) {
      h *= 2.0;
    }
  }
  return traj;
}

Trajectory solve_rescaled(const FieldSpec& field, std::span<const double> c,
                          double tau_end, double budget,
                          const SolveOptions& opts) {
  if (field.kind() == FieldKind::MultiScale) {
    throw DomainError("solve_rescaled needs a single-scale field");
  }
  Rhs rhs = [&field](double tau, std::span<const double> v,
                     std::span<double> dv) {
    field.eval_fast(tau, v.data(), dv.data());
  };
  return solve(rhs, c, tau_end, budget, opts);
}

Trajectory solve_fast(const FieldSpec& field, double eps,
                      std::span<const double> c, double T, double budget,
                      const SolveOptions& opts) {
  if (!(eps > 0.0) || eps > 1.0) throw DomainError("eps must be in (0, 1]");
  if (static_cast<int>(c.size()) != field.dimension()) {
    throw DomainError("initial state has the wrong dimension");
  }
  if (field.kind() == FieldKind::MultiScale) {
    Rhs rhs = [&field, eps](double t, std::span<const double> u,
                            std::span<double> du) {
      du[0] = field.eval_multi(u[0] / eps, t / eps, u[0], t);
    };
    SolveOptions o = opts;
    o.h_max = std::min(dyadic_floor(opts.h_max), dyadic_floor(0.1 * eps));
    return solve(rhs, c, T, budget, o);
  }
  std::vector<double> v0(c.begin(), c.end());
  for (double& x : v0) x /= eps;
  SolveOptions o = opts;
  std::vector<double> scaled(c.size());
  if (opts.observer) {
    o.observer = [&](double tau, std::span<const double> v) {
      for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = eps * v[i];
      opts.observer(eps * tau, scaled);
    };
  }
  Trajectory fast = solve_rescaled(field, v0, T / eps, budget / eps, o);
  return fast.rescaled(eps, eps);
}

}  // namespace homoglab
