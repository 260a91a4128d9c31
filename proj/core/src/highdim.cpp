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

#include "homoglab/highdim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>

#include "homoglab/error.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/parallel.hpp"

namespace homoglab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, res.ptr);
  return v < 0 ? "(" + s + ")" : s;
}

bool upper_half(const std::vector<int>& k) {
  for (int x : k) {
    if (x != 0) return x > 0;
  }
  return false;
}

double dot(const std::vector<int>& k, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) s += k[i] * x[i];
  return s;
}

std::vector<int> grid_index(std::size_t flat, int n, int p) {
  std::vector<int> idx(n);
  for (int i = n - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat % p);
    flat /= p;
  }
  return idx;
}

}  // namespace

BoundedMotionReport estimate_c0(const FieldSpec& field, double T,
                                int pairs_per_axis, double budget,
                                double sample_dt) {
  const int n = field.dimension();
  if (field.kind() != FieldKind::SingleScale || n < 2) {
    throw DomainError("estimate_c0 needs a single-scale field with n >= 2");
  }
  if (!(T > 0.0) || pairs_per_axis < 1 || !(sample_dt > 0.0)) {
    throw DomainError("estimate_c0 needs T > 0 and pairs_per_axis >= 1");
  }
  const int p = pairs_per_axis;
  std::size_t cells = 1, offsets = 1;
  for (int i = 0; i < n; ++i) {
    cells *= static_cast<std::size_t>(p);
    offsets *= static_cast<std::size_t>(p + 1);
  }
  const auto samples = static_cast<std::size_t>(std::floor(T / sample_dt));

  auto sampled_path = [&](const std::vector<double>& c) {
    Trajectory tr = solve_rescaled(field, c, T, budget);
    std::vector<double> out((samples + 1) * n);
    for (std::size_t s = 0; s <= samples; ++s) {
      double tau = std::min(T, static_cast<double>(s) * sample_dt);
      tr.query(tau, std::span<double>(out.data() + s * n, n));
    }
    return out;
  };

  struct CellResult {
    std::vector<double> per_component;
    double worst = -INFINITY;
    std::vector<double> c2;
    std::vector<double> c1;
  };

  auto results = parallel_map(cells, [&](std::size_t a) {
    std::vector<double> c2(n);
    auto ia = grid_index(a, n, p);
    for (int i = 0; i < n; ++i) c2[i] = static_cast<double>(ia[i]) / p;
    auto ref = sampled_path(c2);
    CellResult cr;
    cr.per_component.assign(n, -INFINITY);
    // Offset 0 is the reference itself.
    for (std::size_t b = 1; b < offsets; ++b) {
      auto ib = grid_index(b, n, p + 1);
      std::vector<double> c1(n);
      for (int i = 0; i < n; ++i) {
        c1[i] = c2[i] + static_cast<double>(ib[i]) / p;
      }
      auto other = sampled_path(c1);
      for (std::size_t k = 0; k < ref.size(); ++k) {
        int i = static_cast<int>(k % n);
        double d = ref[k] - other[k];
        cr.per_component[i] = std::max(cr.per_component[i], d);
        if (d > cr.worst) {
          cr.worst = d;
          cr.c2 = c2;
          cr.c1 = c1;
        }
      }
    }
    return cr;
  });

  BoundedMotionReport rep;
  rep.horizon = T;
  rep.pair_grid = cells * (offsets - 1);
  rep.sample_dt = sample_dt;
  rep.per_component.assign(n, -INFINITY);
  double worst = -INFINITY;
  for (const auto& cr : results) {
    for (int i = 0; i < n; ++i) {
      rep.per_component[i] = std::max(rep.per_component[i], cr.per_component[i]);
    }
    if (cr.worst > worst) {
      worst = cr.worst;
      rep.worst_c2 = cr.c2;
      rep.worst_c1 = cr.c1;
    }
  }
  rep.C0_hat = std::max(0.0, worst);
  return rep;
}

EffectiveConstant rotation_vector(const FieldSpec& field, double C0, double tol,
                                  bool rigorous_C0, double budget) {
  if (field.kind() != FieldKind::SingleScale) {
    throw DomainError("rotation_vector needs a single-scale field");
  }
  if (!(tol > 0.0) || !(C0 >= 0.0)) {
    throw DomainError("rotation_vector needs tol > 0 and C0 >= 0");
  }
  const int n = field.dimension();
  auto sup = estimate_sup_norm(field, 64);
  std::vector<double> A(n);
  double A_max = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = sup.declared ? sup.value[i] : kSafetyFactor * sup.value[i];
    A[i] = 1.0 + C0 + 2.0 * s;
    A_max = std::max(A_max, A[i]);
  }
  double Kd = std::ceil(A_max / tol);
  if (Kd > 2e7) {
    throw IntegrationError("rotation_vector horizon K=" + std::to_string(Kd) +
                           " exceeds the cap; loosen tol");
  }
  if (!(budget > 0.0)) budget = tol * Kd / 10.0;
  SolveOptions o;
  o.max_nodes = 16;
  std::vector<double> c0(n, 0.0);
  Trajectory tr = solve_rescaled(field, c0, Kd, budget, o);
  EffectiveConstant e;
  e.K = static_cast<std::int64_t>(Kd);
  e.method = EffectiveMethod::LongTimeAverage;
  e.rigorous = rigorous_C0;
  for (int i = 0; i < n; ++i) {
    e.value.push_back(tr.final_state()[i] / Kd);
    e.error_bar.push_back(A[i] / Kd + budget / Kd);
  }
  return e;
}

FieldSpec shear_field(std::span<const double> xi, const ModeMap& G) {
  const int n = static_cast<int>(xi.size());
  if (n < 1 || n > 8) throw DomainError("shear_field needs 1..8 frequencies");
  QuasiPeriodicField torus(std::vector<double>(xi.begin(), xi.end()), G);
  try {
    torus.validate();
  } catch (const DomainError& e) {
    throw DomainError(std::string("shear profile G rejected: ") + e.what());
  }
  for (const auto& [k, c] : G) {
    if (std::abs(c) == 0.0 || !upper_half(k)) continue;
    if (std::abs(dot(k, xi)) < 1e-12) {
      throw DomainError("frequency is resonant with a mode of G");
    }
  }
  auto var = [n](int i) {
    return n == 1 ? std::string("r") : "r" + std::to_string(i + 1);
  };
  std::string g = shortest(G.count(std::vector<int>(n, 0))
                               ? G.at(std::vector<int>(n, 0)).real()
                               : 0.0);
  for (const auto& [k, c] : G) {
    if (!upper_half(k)) continue;
    std::string arg;
    for (int i = 0; i < n; ++i) {
      if (k[i] == 0) continue;
      if (!arg.empty()) arg += " + ";
      arg += shortest(static_cast<double>(k[i])) + "*" + var(i);
    }
    arg = "2*pi*(" + arg + ")";
    if (c.real() != 0.0) {
      g += " + " + shortest(2.0 * c.real()) + "*cos(" + arg + ")";
    }
    if (c.imag() != 0.0) {
      g += " - " + shortest(2.0 * c.imag()) + "*sin(" + arg + ")";
    }
  }
  std::vector<Expression> comps;
  for (int i = 0; i < n; ++i) {
    comps.push_back(parse(shortest(xi[i]) + "/(" + g + ")"));
  }
  return FieldSpec::single_scale(std::move(comps));
}

double Conjugation::theta(std::span<const double> v) const {
  double s = 0.0;
  for (const auto& [k, c] : theta_modes) {
    if (!upper_half(k)) continue;
    double ph = kTwoPi * dot(k, v);
    s += 2.0 * (c.real() * std::cos(ph) - c.imag() * std::sin(ph));
  }
  return s;
}

double Conjugation::c0_bound() const {
  double xm = 0.0;
  for (double x : xi) xm = std::max(xm, std::abs(x));
  return 1.0 + 2.0 * xm * sup_bound / mean_G;
}

Conjugation conjugation_theta(const ModeMap& G, std::span<const double> xi) {
  Conjugation cj;
  cj.xi.assign(xi.begin(), xi.end());
  for (const auto& [k, c] : G) {
    if (k.size() != xi.size()) {
      throw DomainError("mode dimension does not match the frequency");
    }
    bool zero = std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
    if (zero) {
      cj.mean_G = c.real();
      continue;
    }
    if (std::abs(c) == 0.0) continue;
    double kx = dot(k, xi);
    if (std::abs(kx) < 1e-12) {
      throw DomainError("resonance: k.xi = 0 for a mode of G");
    }
    cj.theta_modes[k] = c / std::complex<double>(0.0, kTwoPi * kx);
    cj.sup_bound += std::abs(c) / (kTwoPi * std::abs(kx));
  }
  if (!(cj.mean_G > 0.0)) throw DomainError("G must have positive mean");
  return cj;
}

double linear_flow_residual(const Conjugation& conj, const FieldSpec& field,
                            std::span<const double> c, double tau_max,
                            double budget) {
  const std::size_t n = conj.xi.size();
  auto w = [&](std::span<const double> v, std::vector<double>& out) {
    double th = conj.theta(v);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = v[i] + conj.xi[i] * th / conj.mean_G;
    }
  };
  std::vector<double> w0(n), wt(n);
  w(c, w0);
  double worst = 0.0;
  SolveOptions o;
  o.max_nodes = 16;
  o.observer = [&](double tau, std::span<const double> v) {
    w(v, wt);
    for (std::size_t i = 0; i < n; ++i) {
      double lin = w0[i] + conj.xi[i] * tau / conj.mean_G;
      worst = std::max(worst, std::abs(wt[i] - lin));
    }
  };
  solve_rescaled(field, c, tau_max, budget, o);
  return worst;
}

}  // namespace homoglab
