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

#include "homoglab/quasiperiodic.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "homoglab/error.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/parallel.hpp"

namespace homoglab {

double mean_value(const QuasiPeriodicField& F) { return F.mean(); }

DiophantineReport check_diophantine(std::span<const double> xi, double sigma,
                                    int k_max, std::optional<double> c_xi) {
  const int n = static_cast<int>(xi.size());
  if (n < 1) throw DomainError("empty frequency vector");
  if (k_max < 1) throw DomainError("k_max must be >= 1");
  if (std::all_of(xi.begin(), xi.end(), [](double x) { return x == 0.0; })) {
    throw DomainError("frequency vector is zero");
  }
  DiophantineReport rep;
  rep.k_max = k_max;
  rep.worst_ratio = INFINITY;
  std::vector<int> k(n, -k_max);
  for (;;) {
    // Upper half space: first nonzero component positive.
    int first = 0;
    for (int x : k) {
      if (x != 0) {
        first = x;
        break;
      }
    }
    if (first > 0) {
      double dot = 0.0;
      double norm2 = 0.0;
      for (int i = 0; i < n; ++i) {
        dot += k[i] * xi[i];
        norm2 += static_cast<double>(k[i]) * k[i];
      }
      double ratio = std::abs(dot) * std::pow(std::sqrt(norm2), sigma);
      if (ratio < rep.worst_ratio) {
        rep.worst_ratio = ratio;
        rep.worst_k = k;
      }
    }
    int i = n - 1;
    while (i >= 0 && ++k[i] > k_max) k[i--] = -k_max;
    if (i < 0) break;
  }
  rep.passes = c_xi ? rep.worst_ratio >= *c_xi : rep.worst_ratio > 0.0;
  return rep;
}

double hs_norm(const QuasiPeriodicField& F, double s) {
  if (!(s >= 0.0)) throw DomainError("hs_norm needs s >= 0");
  double sum = 0.0;
  for (const auto& [k, c] : F.modes()) {
    double k2 = 0.0;
    for (int x : k) k2 += static_cast<double>(x) * x;
    sum += std::pow(1.0 + k2, s) * std::norm(c);
  }
  return std::sqrt(sum);
}

namespace {

double torus_mean_inverse(const QuasiPeriodicField& F, int N) {
  const int n = F.torus_dim();
  std::vector<int> idx(n, 0);
  std::vector<double> xi(n, 0.0);
  double sum = 0.0;
  std::size_t count = 0;
  for (;;) {
    for (int i = 0; i < n; ++i) xi[i] = static_cast<double>(idx[i]) / N;
    sum += 1.0 / F.evaluate_torus(xi);
    ++count;
    int i = 0;
    while (i < n && ++idx[i] == N) idx[i++] = 0;
    if (i == n) break;
  }
  return sum / static_cast<double>(count);
}

}  // namespace

EffectiveConstant effective_speed(const QuasiPeriodicField& F, double tol) {
  if (!(tol > 0.0)) throw DomainError("tol must be positive");
  F.validate();
  const int n = F.torus_dim();
  double prev = torus_mean_inverse(F, 8);
  for (int N = 16;; N *= 2) {
    if (std::pow(static_cast<double>(N), n) > 16.0 * 1024 * 1024) {
      throw IntegrationError("torus harmonic mean did not settle");
    }
    double cur = torus_mean_inverse(F, N);
    double diff = std::abs(cur - prev);
    // Trapezoid sums of smooth periodic functions converge geometrically,
    // so the last change bounds the remaining error.
    if (diff <= 0.1 * tol * cur * cur) {
      EffectiveConstant e;
      e.value = {1.0 / cur};
      e.error_bar = {std::max(diff / (cur * cur), DBL_EPSILON / cur)};
      e.method = EffectiveMethod::HarmonicMean;
      e.rigorous = false;
      return e;
    }
    prev = cur;
  }
}

QpRateTable verify_qp_rate(const QuasiPeriodicField& F,
                           const std::vector<double>& eps_list, double c,
                           double T, double budget) {
  F.validate();
  QpRateTable table;
  table.mean = mean_value(F);
  table.speed = effective_speed(F, 1e-12).scalar();
  FieldSpec field = FieldSpec::quasi_periodic(F);
  table.rows = parallel_map(eps_list.size(), [&](std::size_t j) {
    double eps = eps_list[j];
    QpRateRow row;
    row.eps = eps;
    row.horizon = T;
    SolveOptions o;
    o.max_nodes = 1024;
    o.observer = [&](double t, std::span<const double> u) {
      row.sup_error =
          std::max(row.sup_error, std::abs(u[0] - (c + table.speed * t)));
      row.sup_error_mean =
          std::max(row.sup_error_mean, std::abs(u[0] - (c + table.mean * t)));
    };
    double c0[1] = {c};
    solve_fast(field, eps, c0, T, budget, o);
    row.ratio = row.sup_error / eps;
    return row;
  });
  return table;
}

}  // namespace homoglab
