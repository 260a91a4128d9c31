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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "generators.hpp"
#include "homoglab/catalog.hpp"
#include "homoglab/effective.hpp"
#include "homoglab/error.hpp"
#include "homoglab/integrate.hpp"

namespace homoglab {
namespace {

using testing::Rng;
using testing::kSeed;

FieldSpec scalar(const char* src) { return FieldSpec::single_scale({parse(src)}); }

EffectiveOptions no_shortcuts() {
  EffectiveOptions o;
  o.shortcuts = false;
  return o;
}

TEST(Effective, ConstantField) {
  EffectiveConstant e = effective_constant(scalar("1.5"), 1e-3, no_shortcuts());
  EXPECT_NEAR(e.scalar(), 1.5, 1e-12);
  EXPECT_EQ(e.method, EffectiveMethod::LongTimeAverage);
}

TEST(Effective, HarmonicByBothMethods) {
  FieldSpec f = scalar("2 + sin(2*pi*r)");
  EffectiveConstant h = effective_constant(f, 1e-8);
  EXPECT_EQ(h.method, EffectiveMethod::HarmonicMean);
  EXPECT_NEAR(h.scalar(), std::sqrt(3.0), 1e-8);
  EXPECT_LE(std::abs(h.scalar() - std::sqrt(3.0)), h.bar());

  EffectiveConstant l = effective_constant(f, 1e-3, no_shortcuts());
  EXPECT_EQ(l.method, EffectiveMethod::LongTimeAverage);
  EXPECT_GT(l.K, 0);
  EXPECT_LE(std::abs(l.scalar() - std::sqrt(3.0)), l.bar());
  EXPECT_LE(l.bar(), 1.1e-3);
}

TEST(Effective, NegativeAndEquilibriumFields) {
  EffectiveConstant n = effective_constant(scalar("-(2 + sin(2*pi*r))"), 1e-8);
  EXPECT_NEAR(n.scalar(), -std::sqrt(3.0), 1e-8);
  EffectiveConstant z = effective_constant(scalar("sin(2*pi*r)"), 1e-8);
  EXPECT_EQ(z.method, EffectiveMethod::Equilibrium);
  EXPECT_EQ(z.scalar(), 0.0);
  EffectiveConstant z2 = effective_constant(scalar("sin(2*pi*r)"), 1e-3, no_shortcuts());
  EXPECT_LE(std::abs(z2.scalar()), z2.bar());
}

TEST(Effective, SharpnessAverageIsMinusOne) {
  EffectiveConstant e = effective_constant(catalog("sharpness").field, 1e-3);
  EXPECT_EQ(e.method, EffectiveMethod::LongTimeAverage);
  EXPECT_LE(std::abs(e.scalar() + 1.0), e.bar());
}

TEST(Effective, TimeOnlyFieldIsItsAverage) {
  EffectiveConstant e = effective_constant(scalar("1 + cos(2*pi*tau)"), 1e-3);
  EXPECT_LE(std::abs(e.scalar() - 1.0), e.bar());
}

TEST(Effective, HorizonCap) {
  EffectiveOptions o = no_shortcuts();
  o.max_K = 1000;
  EXPECT_THROW(effective_constant(scalar("2 + sin(2*pi*r)"), 1e-6, o),
               IntegrationError);
  EXPECT_THROW(effective_constant(scalar("1"), 0.0), DomainError);
}

TEST(Effective, FeketeConvergence) {
  // |v(k;0)/k - f-bar| <= (1 + 2|f|)/k for every k.
  FieldSpec f = scalar("2 + sin(2*pi*r)");
  double c[1] = {0.0};
  SolveOptions o;
  std::vector<double> at_integers(65, NAN);
  o.observer = [&](double t, std::span<const double> v) {
    double k = std::round(t);
    if (k == t && k >= 1 && k <= 64) at_integers[static_cast<int>(k)] = v[0];
  };
  solve_rescaled(f, c, 64.0, 1e-10, o);
  for (int k = 1; k <= 64; ++k) {
    ASSERT_FALSE(std::isnan(at_integers[k])) << k;
    EXPECT_LE(std::abs(at_integers[k] / k - std::sqrt(3.0)), 7.0 / k + 1e-9);
  }
}

TEST(Effective, InitialPointIndependence) {
  FieldSpec f = catalog("sharpness").field;
  Rng rng(kSeed);
  const double K = 200.0;
  double z[1] = {0.0};
  double v0 = solve_rescaled(f, z, K, 1e-9).final_state()[0];
  for (int i = 0; i < 20; ++i) {
    double c[1] = {testing::uniform(rng, -5, 5)};
    double vc = solve_rescaled(f, c, K, 1e-9).final_state()[0];
    EXPECT_LE(std::abs(vc / K - v0 / K), (std::ceil(std::abs(c[0])) + 1) / K + 1e-9);
  }
}

TEST(Effective, LambertW) {
  EXPECT_EQ(lambert_w(0.0), 0.0);
  EXPECT_NEAR(lambert_w(std::exp(1.0)), 1.0, 1e-12);
  EXPECT_NEAR(lambert_w(3.0 * std::exp(3.0)), 3.0, 1e-12);
  EXPECT_THROW(lambert_w(-0.1), DomainError);
  Rng rng(kSeed + 1);
  double prev_x = 0.0, prev_w = 0.0;
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) xs.push_back(std::pow(10.0, testing::uniform(rng, -12, 6)));
  std::sort(xs.begin(), xs.end());
  for (double x : xs) {
    double w = lambert_w(x);
    EXPECT_LE(std::abs(w * std::exp(w) - x), 1e-12 * std::max(1.0, x)) << x;
    if (x > prev_x) EXPECT_GE(w, prev_w);
    prev_x = x;
    prev_w = w;
  }
}

TEST(Effective, ModulusBound) {
  double d = 1.0 / (3.0 * std::exp(3.0));
  EXPECT_DOUBLE_EQ(modulus_bound(1.0, d), 2.0 / 3.0);
  EXPECT_TRUE(std::isinf(modulus_bound(1.0, 1.0)));
  EXPECT_DOUBLE_EQ(modulus_bound(0.5, d), 1.0 / 3.0);
  EXPECT_THROW(modulus_bound(0.0, 0.1), DomainError);
  EXPECT_THROW(modulus_bound(1.0, -0.1), DomainError);
  Rng rng(kSeed + 2);
  for (int i = 0; i < 200; ++i) {
    double k = testing::uniform(rng, 0.1, 3.0);
    double a = std::pow(10.0, testing::uniform(rng, -12, 0));
    double b = a * testing::uniform(rng, 1.0, 10.0);
    EXPECT_LE(modulus_bound(k, b), INFINITY);
    EXPECT_GE(modulus_bound(k, b), modulus_bound(k, a));
    EXPECT_GE(modulus_bound(k * 1.5, a), modulus_bound(k, a));
  }
}

TEST(Effective, FrozenMultiScaleField) {
  FieldSpec w = catalog("wiggly-gradient").field;
  EffectiveConstant e = effective_field(w, 1.5, 0.0, 1e-9);
  EXPECT_NEAR(e.scalar(), -std::sqrt(2.0), 1e-8);
  EXPECT_EQ(effective_field(w, 0.2, 0.0, 1e-9).scalar(), 0.0);
  EXPECT_THROW(effective_field(w, 11.0, 0.0, 1e-9), DomainError);

  FieldSpec h = FieldSpec::multi_scale(parse("2 + sin(2*pi*r)"));
  EXPECT_NEAR(effective_field(h, 3.0, -2.0, 1e-9).scalar(), std::sqrt(3.0), 1e-9);

  // Non-increasing in u, and |f-bar| <= |f|.
  double sup = estimate_sup_norm(w, 64).max();
  double prev = INFINITY;
  for (double u = -3.0; u <= 3.0; u += 0.125) {
    double v = effective_field(w, u, 0.0, 1e-8).scalar();
    EXPECT_LE(v, prev + 2e-8);
    EXPECT_LE(std::abs(v), sup);
    prev = v;
  }
}

TEST(Effective, EmpiricalModulusRespectsBound) {
  FieldSpec w = catalog("wiggly-gradient").field;
  double kappa = estimate_lipschitz(w, 64).value * kSafetyFactor;
  Rng rng(kSeed + 3);
  for (int i = 0; i < 40; ++i) {
    double u1 = testing::uniform(rng, -2.0, 2.0);
    double u2 = u1 + std::pow(10.0, testing::uniform(rng, -6, 0));
    double d = std::abs(effective_field(w, u1, 0, 1e-9).scalar() -
                        effective_field(w, u2, 0, 1e-9).scalar());
    EXPECT_LE(d, modulus_bound(kappa, u2 - u1) + 2e-9);
  }
}

TEST(Effective, ImplicitEulerPath) {
  auto fbar = [](double u, double) {
    EffectiveConstant e;
    e.value = {std::abs(u) > 0.5 ? -std::copysign(std::sqrt(u * u - 0.25), u) : 0.0};
    e.error_bar = {0.0};
    return e;
  };
  EffectiveSolveOptions o;
  o.sup_norm = 3.0;
  o.time_independent = true;
  EffectivePath p = solve_effective(fbar, 1.5, 3.0, 1e-3, o);
  double ts = std::acosh(3.0);
  for (double t = 0.0; t <= 3.0; t += 0.1) {
    double exact = t < ts ? 0.5 * std::cosh(ts - t) : 0.5;
    EXPECT_NEAR(p.value(t), exact, 5e-3) << t;
  }
  EXPECT_GT(p.memo_hits, 0u);

  auto constant = [](double, double) {
    EffectiveConstant e;
    e.value = {std::sqrt(3.0)};
    e.error_bar = {0.0};
    return e;
  };
  EffectivePath q = solve_effective(constant, 0.0, 2.0, 0.01, o);
  EXPECT_NEAR(q.value(2.0), 2.0 * std::sqrt(3.0), 1e-9);
}

TEST(Effective, ImplicitEulerIsMonotoneForSteepFields) {
  auto steep = [](double u, double) {
    EffectiveConstant e;
    e.value = {-std::tanh(100.0 * u)};
    e.error_bar = {0.0};
    return e;
  };
  EffectiveSolveOptions o;
  o.sup_norm = 1.0;
  EffectivePath p = solve_effective(steep, 0.5, 2.0, 0.05, o);
  for (std::size_t k = 1; k < p.u.size(); ++k) {
    EXPECT_LE(p.u[k], p.u[k - 1] + 1e-12);
    EXPECT_GE(p.u[k], -1e-9);
  }
  // Explicit Euler with the same step overshoots and oscillates.
  double u = 0.5, lo = 0.0;
  for (int k = 0; k < 40; ++k) {
    u += 0.05 * -std::tanh(100.0 * u);
    lo = std::min(lo, u);
  }
  EXPECT_LT(lo, -0.01);
}

TEST(Effective, MonotonicityViolation) {
  auto increasing = [](double u, double) {
    EffectiveConstant e;
    e.value = {u};
    e.error_bar = {0.0};
    return e;
  };
  EffectiveSolveOptions o;
  o.sup_norm = 10.0;
  EXPECT_THROW(solve_effective(increasing, 1.0, 1.0, 0.1, o), MonotonicityError);
}

TEST(Effective, Memo) {
  EffectiveMemo m;
  double v = 0.0;
  EXPECT_FALSE(m.lookup(1, 2, &v));
  m.store(1, 2, 3.5);
  EXPECT_TRUE(m.lookup(1, 2, &v));
  EXPECT_EQ(v, 3.5);
  EXPECT_EQ(m.size(), 1u);
}

TEST(Effective, SubadditivityAndOscillation) {
  const double budget = 1e-9;
  EXPECT_EQ(subadditivity_defect(scalar("0*r"), 1, 2, 3, 0, budget), 0.0);
  EXPECT_NEAR(subadditivity_defect(scalar("1.5 + 0*r"), 1, 2, 3, 0, budget), 0.0, 1e-12);
  Rng rng(kSeed + 4);
  FieldSpec f = scalar("2 + sin(2*pi*r)");
  for (int i = 0; i < 30; ++i) {
    double s = testing::uniform(rng, 0.1, 5), l = testing::uniform(rng, 0.1, 5),
           t = testing::uniform(rng, 0.1, 5), c = testing::uniform(rng, 0, 1);
    EXPECT_LE(subadditivity_defect(f, s, l, t, c, budget), 8.0 + 6.0 * budget);
  }
  Oscillation o = oscillation(f, 7.0, 64, budget);
  EXPECT_LE(o.M - o.m, 1.0 + 2.0 * budget);
  Oscillation s3 = oscillation(catalog("sharpness").field, 3.0, 64, budget);
  EXPECT_LE(s3.M - s3.m, 1.0 + 2.0 * budget);
  Oscillation a = oscillation(scalar("1.25 + 0*r"), 2.0, 32, budget);
  EXPECT_NEAR(a.M, 2.5, 1e-12);
  EXPECT_NEAR(a.m, 2.5, 1e-12);
}

}  // namespace
}  // namespace homoglab
