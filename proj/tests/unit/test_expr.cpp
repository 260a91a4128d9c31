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
#include <cstring>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "homoglab/error.hpp"
#include "homoglab/expr.hpp"

namespace homoglab {
namespace {

using testing::Rng;
using testing::kSeed;

double eval(std::string_view src, double r = 0.0, double tau = 0.0) {
  Bindings b;
  Expression e = parse(src);
  if (e.depends_on(kVarR)) b.set(kVarR, r);
  if (e.depends_on(kVarTau)) b.set(kVarTau, tau);
  return e.evaluate(b);
}

TEST(Expr, Precedence) {
  EXPECT_EQ(eval("1+2*3"), 7.0);
  EXPECT_EQ(eval("(1+2)*3"), 9.0);
  EXPECT_EQ(eval("8/4/2"), 1.0);
  EXPECT_EQ(eval("2-3-4"), -5.0);
  EXPECT_EQ(eval("-2*3"), -6.0);
  EXPECT_EQ(eval("--2"), 2.0);
}

TEST(Expr, Examples) {
  Bindings b;
  b.set("u", 7.0);
  EXPECT_EQ(parse("u").evaluate(b), 7.0);
  EXPECT_NEAR(eval("1/(2+sin(2*pi*r))", 0.75), 1.0, 1e-15);
  EXPECT_EQ(eval("frac(1.75)"), 0.75);
  EXPECT_EQ(eval("frac(-0.25)"), 0.75);
  EXPECT_EQ(eval("tri(0.25)"), 0.25);
  EXPECT_EQ(eval("tri(1)"), 0.5);
  EXPECT_EQ(eval("min(3, -1)"), -1.0);
  EXPECT_EQ(eval("max(3, -1)"), 3.0);
  EXPECT_EQ(eval("abs(-2.5)"), 2.5);
  EXPECT_NEAR(eval("exp(1)"), std::exp(1.0), 0.0);
  EXPECT_NEAR(eval("pi"), M_PI, 0.0);
  EXPECT_EQ(eval("1.5e2"), 150.0);
}

TEST(Expr, ParseErrorOffsets) {
  try {
    parse("2 +");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 3u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse("1 + foo");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_NE(std::string(e.what()).find("foo"), std::string::npos);
  }
  EXPECT_THROW(parse("2^3"), ParseError);
  EXPECT_THROW(parse("sin(1, 2)"), ParseError);
  EXPECT_THROW(parse("min(1)"), ParseError);
  EXPECT_THROW(parse("(1 + 2"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("1 2"), ParseError);
  EXPECT_THROW(parse("r9"), ParseError);
}

TEST(Expr, EvalErrors) {
  Bindings b;
  b.set(kVarR, 0.0);
  EXPECT_THROW(parse("1/r").evaluate(b), EvalError);
  EXPECT_THROW(parse("tau").evaluate(b), EvalError);
  EXPECT_THROW(parse("exp(1000)").evaluate(Bindings()), EvalError);
  b.set(kVarTau, std::nan(""));
  EXPECT_THROW(parse("tau").evaluate(b), EvalError);
}

TEST(Expr, FreeVariables) {
  Expression e = parse("u1 + sin(r2) * t");
  EXPECT_TRUE(e.depends_on(var_u(1)));
  EXPECT_TRUE(e.depends_on(var_r(2)));
  EXPECT_TRUE(e.depends_on(kVarT));
  EXPECT_FALSE(e.depends_on(kVarTau));
  EXPECT_TRUE(parse("2*pi").is_constant());
  EXPECT_EQ(var_name(kVarTau), "tau");
  EXPECT_EQ(var_slot("u3"), var_u(3));
  EXPECT_FALSE(var_slot("x").has_value());
}

TEST(Expr, SubstituteAndOperators) {
  Expression e = parse("r + 2*tau");
  Expression s = e.substitute(kVarTau, parse("-tau"));
  Bindings b;
  b.set(kVarR, 1.0).set(kVarTau, 0.5);
  EXPECT_EQ(s.evaluate(b), 0.0);
  Expression built = -(Expression::variable(kVarR) * Expression::constant(3.0)) /
                     Expression::constant(2.0);
  EXPECT_EQ(built.evaluate(b), -1.5);
  EXPECT_EQ(parse(built.to_string()).evaluate(b), -1.5);
}

TEST(Expr, RoundTripIsBitIdentical) {
  Rng rng(kSeed);
  int compared = 0;
  for (int i = 0; i < 200; ++i) {
    Expression e = parse(testing::random_expression(rng, 5));
    Expression back = parse(e.to_string());
    EXPECT_EQ(back.to_string(), e.to_string());
    for (int j = 0; j < 5; ++j) {
      Bindings b;
      b.set(kVarR, testing::uniform(rng, -3, 3))
          .set(kVarTau, testing::uniform(rng, -3, 3));
      double x = 0.0, y = 0.0;
      bool ex = false, ey = false;
      try { x = e.evaluate(b); } catch (const EvalError&) { ex = true; }
      try { y = back.evaluate(b); } catch (const EvalError&) { ey = true; }
      ASSERT_EQ(ex, ey) << e.source();
      if (!ex) {
        ASSERT_EQ(std::memcmp(&x, &y, sizeof x), 0) << e.source();
        ++compared;
      }
    }
  }
  EXPECT_GT(compared, 800);
}

TEST(Expr, FracAndTriArePeriodic) {
  Rng rng(kSeed + 1);
  Expression f = parse("frac(r)"), t = parse("tri(r)");
  for (int i = 0; i < 1000; ++i) {
    double r = testing::uniform(rng, -100, 100);
    Bindings a, b;
    a.set(kVarR, r);
    b.set(kVarR, r + 1.0);
    EXPECT_LE(std::abs(f.evaluate(a) - f.evaluate(b)), 1e-12);
    EXPECT_LE(std::abs(t.evaluate(a) - t.evaluate(b)), 1e-12);
    EXPECT_GE(f.evaluate(a), 0.0);
    EXPECT_LT(f.evaluate(a), 1.0);
  }
}

TEST(Expr, CheckPeriodicity) {
  EXPECT_LE(check_periodicity(parse("sin(2*pi*r)"), kVarR, 256).max_deviation,
            1e-12);
  EXPECT_NEAR(check_periodicity(parse("r"), kVarR, 256).max_deviation, 1.0,
              1e-12);
  EXPECT_LE(check_periodicity(parse("tri(r+tau)"), kVarTau, 256).max_deviation,
            1e-12);
  auto a = check_periodicity(parse("sin(2*pi*r)*tau"), kVarR, 64);
  auto b = check_periodicity(parse("sin(2*pi*r)*tau"), kVarR, 64);
  EXPECT_EQ(a.max_deviation, b.max_deviation);
  EXPECT_EQ(a.samples, 64u);
}

TEST(Expr, ConcurrentEvaluation) {
  Expression e = parse("sin(2*pi*r) + tri(r + tau)");
  std::vector<double> out(4);
  std::vector<std::thread> pool;
  for (int k = 0; k < 4; ++k) {
    pool.emplace_back([&, k] {
      double s = 0.0;
      for (int i = 0; i < 10000; ++i) {
        Bindings b;
        b.set(kVarR, i * 1e-4).set(kVarTau, 0.25);
        s += e.evaluate(b);
      }
      out[k] = s;
    });
  }
  for (auto& t : pool) t.join();
  for (int k = 1; k < 4; ++k) EXPECT_EQ(out[k], out[0]);
}

}  // namespace
}  // namespace homoglab
