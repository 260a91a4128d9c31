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

#include "homoglab/catalog.hpp"
#include "homoglab/error.hpp"
#include "homoglab/quasiperiodic.hpp"

namespace homoglab {
namespace {

const QuasiPeriodicField& qp_cosine() {
  static const Scenario s = catalog("qp-cosine");
  return *s.field.qp();
}

TEST(QuasiPeriodic, MeanAndSobolevNorm) {
  EXPECT_DOUBLE_EQ(mean_value(qp_cosine()), 3.0);
  EXPECT_NEAR(hs_norm(qp_cosine(), 1.0), std::sqrt(11.0), 1e-12);
  EXPECT_NEAR(hs_norm(qp_cosine(), 0.0), std::sqrt(10.0), 1e-12);
}

TEST(QuasiPeriodic, LineEvaluation) {
  const auto& F = qp_cosine();
  for (double r : {0.0, 0.3, 1.7, -4.2}) {
    double want = 3.0 + std::cos(2 * M_PI * r) + std::cos(2 * M_PI * kGolden * r);
    EXPECT_NEAR(F.evaluate_line(r), want, 1e-12);
    double d = -2 * M_PI * (std::sin(2 * M_PI * r) + kGolden * std::sin(2 * M_PI * kGolden * r));
    EXPECT_NEAR(F.derivative_line(r), d, 1e-9);
  }
}

TEST(QuasiPeriodic, GoldenIsDiophantine) {
  auto xi = golden_frequency();
  DiophantineReport r = check_diophantine(xi, 1.0, 50);
  EXPECT_TRUE(r.passes);
  EXPECT_GT(r.worst_ratio, 0.8);
  EXPECT_LT(r.worst_ratio, 0.9);
  std::vector<double> rational = {1.0, 1.5};
  DiophantineReport q = check_diophantine(rational, 1.0, 10);
  EXPECT_FALSE(q.passes);
  EXPECT_NEAR(q.worst_ratio, 0.0, 1e-12);
  EXPECT_FALSE(check_diophantine(xi, 1.0, 50, 2.0).passes);
}

TEST(QuasiPeriodic, EffectiveSpeedIsHarmonicMean) {
  EffectiveConstant e = effective_speed(qp_cosine(), 1e-10);
  EXPECT_NEAR(e.scalar(), 2.604008190531, 1e-9);
  EXPECT_LT(e.scalar(), mean_value(qp_cosine()));
  QuasiPeriodicField flat(golden_frequency(), {{{0, 0}, {2.5, 0.0}}});
  EXPECT_NEAR(effective_speed(flat, 1e-12).scalar(), 2.5, 1e-12);
}

TEST(QuasiPeriodic, RateAgainstSpeedIsUniform) {
  QpRateTable t = verify_qp_rate(qp_cosine(), {0.1, 0.05, 0.025}, 0.0, 10.0, 1e-5);
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& row : t.rows) {
    EXPECT_LE(row.ratio, 1.0);
    EXPECT_GT(row.sup_error_mean, 10.0 * row.sup_error);
  }
}

TEST(QuasiPeriodic, ValidationRejectsBadFields) {
  EXPECT_THROW(QuasiPeriodicField(golden_frequency(), {{{0, 0}, {0.5, 0.0}}, {{1, 0}, {1.0, 0.0}}, {{-1, 0}, {1.0, 0.0}}}).validate(),
               DomainError);
  EXPECT_THROW(QuasiPeriodicField(golden_frequency(), {{{0, 0}, {3.0, 0.0}}, {{1, 0}, {0.5, 0.1}}, {{-1, 0}, {0.5, 0.1}}}).validate(),
               DomainError);
}

}  // namespace
}  // namespace homoglab
