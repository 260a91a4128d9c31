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

#include <chrono>
#include <cmath>

#include "homoglab/error.hpp"
#include "homoglab/quadrature.hpp"

namespace homoglab {
namespace {

TEST(Quadrature, Polynomials) {
  EXPECT_NEAR(integrate_adaptive([](double x) { return x * x; }, 0, 1, 1e-14).value,
              1.0 / 3.0, 1e-15);
  EXPECT_NEAR(integrate_adaptive([](double x) { return std::sin(x); }, 0, M_PI, 1e-13).value,
              2.0, 1e-13);
  EXPECT_EQ(integrate_adaptive([](double) { return 1.0; }, 2, 2, 1e-9).value, 0.0);
  EXPECT_NEAR(integrate_adaptive([](double x) { return x; }, 1, 0, 1e-12).value,
              -0.5, 1e-15);
}

TEST(Quadrature, KinkedIntegrand) {
  auto r = integrate_adaptive([](double x) { return std::abs(x - 1.0 / 3.0); },
                              0, 1, 1e-12);
  EXPECT_NEAR(r.value, 5.0 / 18.0, 1e-12);
  EXPECT_LE(r.error, 1e-12);
  EXPECT_NEAR(r.l1, 5.0 / 18.0, 1e-9);
}

TEST(Quadrature, TinyIntervalsTerminate) {
  // Tolerances far below the roundoff of the panel sum must still stop.
  auto start = std::chrono::steady_clock::now();
  double lambda = 2000.0, t1 = 1e-4;
  auto r = integrate_adaptive(
      [&](double s) { return std::exp(-lambda * (t1 - s)); }, 0.0, t1, 1e-20);
  double exact = (1.0 - std::exp(-lambda * t1)) / lambda;
  EXPECT_NEAR(r.value, exact, 1e-18);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count(),
            1.0);
}

TEST(Quadrature, Errors) {
  EXPECT_THROW(integrate_adaptive([](double x) { return x; }, 0, 1, 0.0),
               DomainError);
  EXPECT_THROW(integrate_adaptive([](double x) { return 1.0 / std::sqrt(x) + std::sin(1e6 * x) / x; }, 1e-300, 1, 1e-12, 8),
               IntegrationError);
}

}  // namespace
}  // namespace homoglab
