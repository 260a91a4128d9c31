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

#include <cmath>

#include "generators.hpp"
#include "homoglab/catalog.hpp"
#include "homoglab/error.hpp"
#include "homoglab/fields.hpp"

namespace homoglab {
namespace {

using testing::Rng;
using testing::kSeed;

FieldSpec scalar(const char* src) { return FieldSpec::single_scale({parse(src)}); }

TEST(Fields, KindNames) {
  for (auto k : {FieldKind::SingleScale, FieldKind::MultiScale,
                 FieldKind::QuasiPeriodic}) {
    EXPECT_EQ(parse_field_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_field_kind("periodic"), ConfigError);
}

TEST(Fields, SingleScaleEvaluation) {
  FieldSpec f = scalar("2 + sin(2*pi*r)");
  f.validate();
  double r = 0.25, out = 0.0;
  f.eval_fast(0.0, &r, &out);
  EXPECT_NEAR(out, 3.0, 1e-15);
  EXPECT_TRUE(f.autonomous());
  EXPECT_FALSE(scalar("tri(r + tau) - 1").autonomous());

  FieldSpec v = FieldSpec::single_scale({parse("1 + 0*r1"), parse("cos(2*pi*r2)")});
  double rv[2] = {0.3, 0.5}, ov[2];
  v.eval_fast(0.0, rv, ov);
  EXPECT_EQ(ov[0], 1.0);
  EXPECT_NEAR(ov[1], -1.0, 1e-15);
}

TEST(Fields, RejectsBadComponents) {
  EXPECT_THROW(scalar("r").validate(), DomainError);
  EXPECT_THROW(scalar("sin(tau/2)").validate(), DomainError);
  EXPECT_THROW(scalar("u + sin(2*pi*r)"), DomainError);
  EXPECT_THROW(FieldSpec::single_scale({}), DomainError);
  EXPECT_THROW(FieldSpec::multi_scale(parse("-u"), UTBox{1, 0, 0, 1}),
               DomainError);
}

TEST(Fields, MultiScaleMonotonicity) {
  FieldSpec ok = FieldSpec::multi_scale(parse("-u - 0.5*sin(2*pi*r)"));
  ok.validate();
  EXPECT_DOUBLE_EQ(ok.eval_multi(0.25, 0.0, 1.0, 0.0), -1.5);
  FieldSpec bad = FieldSpec::multi_scale(parse("u + sin(2*pi*r)"));
  EXPECT_THROW(bad.validate(), DomainError);
}

TEST(Fields, StrictBoundedness) {
  ValidationOptions strict;
  strict.strict_bounded = true;
  FieldSpec linear = FieldSpec::multi_scale(parse("-u"));
  linear.validate();
  EXPECT_THROW(linear.validate(strict), DomainError);
  FieldSpec clamped = catalog("wiggly-gradient").field;
  clamped.validate(strict);
}

QuasiPeriodicField qp_cosine() {
  return QuasiPeriodicField({1.0, kGolden},
                            {{{0, 0}, 3.0},
                             {{1, 0}, 0.5},
                             {{-1, 0}, 0.5},
                             {{0, 1}, 0.5},
                             {{0, -1}, 0.5}});
}

TEST(Fields, QuasiPeriodicMatchesDirectSum) {
  QuasiPeriodicField F = qp_cosine();
  F.validate();
  EXPECT_EQ(F.mean(), 3.0);
  Rng rng(kSeed);
  for (int i = 0; i < 200; ++i) {
    double r = testing::uniform(rng, -50, 50);
    double direct = 3.0 + std::cos(2 * M_PI * r) + std::cos(2 * M_PI * kGolden * r);
    EXPECT_NEAR(F.evaluate_line(r), direct, 1e-12);
    double h = 1e-6;
    double fd = (F.evaluate_line(r + h) - F.evaluate_line(r - h)) / (2 * h);
    EXPECT_NEAR(F.derivative_line(r), fd, 1e-6);
  }
}

TEST(Fields, QuasiPeriodicValidation) {
  QuasiPeriodicField missing({1.0, kGolden}, {{{0, 0}, 3.0}, {{1, 0}, 0.5}});
  EXPECT_THROW(missing.validate(), DomainError);
  QuasiPeriodicField negative({1.0, kGolden},
                              {{{0, 0}, 0.5}, {{1, 0}, 0.5}, {{-1, 0}, 0.5}});
  EXPECT_THROW(negative.validate(), DomainError);
  QuasiPeriodicField complex_part({1.0, kGolden},
                                  {{{0, 0}, {3.0, 0.1}}});
  EXPECT_THROW(complex_part.validate(), DomainError);
  EXPECT_THROW(QuasiPeriodicField({1, 1, 1, 1, 1}, {{{0, 0, 0, 0, 0}, 1.0}}).validate(),
               DomainError);
}

TEST(Fields, LipschitzAndSupEstimates) {
  FieldSpec f = scalar("2 + sin(2*pi*r)");
  LipschitzEstimate L = estimate_lipschitz(f, 256);
  EXPECT_FALSE(L.declared);
  EXPECT_NEAR(L.value, 2 * M_PI, 2 * M_PI * 1e-3);
  SupNormEstimate S = estimate_sup_norm(f, 64);
  EXPECT_NEAR(S.max(), 3.0, 1e-12);

  f.declared_kappa = 7.0;
  f.declared_sup = 3.5;
  EXPECT_TRUE(estimate_lipschitz(f, 64).declared);
  EXPECT_EQ(estimate_lipschitz(f, 64).value, 7.0);
  EXPECT_EQ(estimate_sup_norm(f, 64).max(), 3.5);
  EXPECT_THROW(estimate_lipschitz(f, 4), DomainError);

  FieldSpec q = FieldSpec::quasi_periodic(qp_cosine());
  double lq = estimate_lipschitz(q, 64).value;
  EXPECT_LE(lq, 2 * M_PI * (1 + kGolden) * 1.0000001);
  EXPECT_GE(lq, 0.9 * 2 * M_PI * (1 + kGolden));
  EXPECT_NEAR(estimate_sup_norm(q, 64).max(), 5.0, 0.05);
}

TEST(Fields, CatalogScenariosValidate) {
  for (const auto& name : catalog_names()) {
    Scenario s = catalog(name);
    EXPECT_EQ(s.name, name);
    EXPECT_FALSE(s.checks.empty());
  }
  EXPECT_THROW(catalog("nope"), DomainError);
  EXPECT_NEAR(wiggly_clamp(), std::sqrt(4 + 1 / M_PI), 1e-15);
  EXPECT_NEAR(*catalog("harmonic").expected_fbar, std::sqrt(3.0), 1e-15);
}

}  // namespace
}  // namespace homoglab
