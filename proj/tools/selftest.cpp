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

#include "selftest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "homoglab/catalog.hpp"
#include "homoglab/coupled.hpp"
#include "homoglab/csv.hpp"
#include "homoglab/effective.hpp"
#include "homoglab/error.hpp"
#include "homoglab/expr.hpp"
#include "homoglab/harness.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/quasiperiodic.hpp"

namespace homoglab::cli {

namespace {

using Rng = std::mt19937_64;

class Suite {
 public:
  explicit Suite(std::string dir) : dir_(std::move(dir)) {}

  // Counts a failure against the table written next.
  void check(bool ok) { pending_ += ok ? 0 : 1; }

  void write(const std::string& name, const CsvTable& table) {
    table.save((std::filesystem::path(dir_) / name).string());
    fmt::print("{:<32} {}\n", name, pending_ == 0 ? "ok" : "FAILED");
    failed_ += pending_;
    pending_ = 0;
  }

  int failed() const { return failed_; }

 private:
  std::string dir_;
  int failed_ = 0;
  int pending_ = 0;
};

std::string pass(bool ok) { return ok ? "1" : "0"; }

// Random expression in r and tau from the full grammar.
std::string random_expression(Rng& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  static const char* kLeaves[] = {"r", "tau", "pi", "0.5", "2", "1.25", "3"};
  static const char* kUnary[] = {"sin", "cos", "abs", "exp", "frac", "tri"};
  static const char* kBinary[] = {"+", "-", "*", "/"};
  if (depth <= 0) {
    return kLeaves[std::uniform_int_distribution<int>(0, 6)(rng)];
  }
  int k = pick(rng);
  if (k < 2) return kLeaves[std::uniform_int_distribution<int>(0, 6)(rng)];
  if (k < 4) {
    const char* f = kUnary[std::uniform_int_distribution<int>(0, 5)(rng)];
    std::string arg = random_expression(rng, depth - 1);
    // Keep exp arguments small so values stay finite.
    if (std::string(f) == "exp") arg = "sin(" + arg + ")";
    return std::string(f) + "(" + arg + ")";
  }
  if (k < 5) {
    const char* f = std::uniform_int_distribution<int>(0, 1)(rng) ? "min" : "max";
    return std::string(f) + "(" + random_expression(rng, depth - 1) + ", " +
           random_expression(rng, depth - 1) + ")";
  }
  if (k < 6) return "-" + random_expression(rng, depth - 1);
  const char* op = kBinary[std::uniform_int_distribution<int>(0, 3)(rng)];
  return "(" + random_expression(rng, depth - 1) + " " + op + " " +
         random_expression(rng, depth - 1) + ")";
}

std::string eval_text(const Expression& e, double r, double tau) {
  try {
    Bindings b;
    b.set(kVarR, r).set(kVarTau, tau);
    return format_number(e.evaluate(b));
  } catch (const EvalError&) {
    return "error";
  }
}

void expressions(Suite& s, Rng& rng) {
  CsvTable t({"id", "expression", "r", "tau", "value", "reparsed", "match"});
  std::uniform_real_distribution<double> x(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    std::string src = random_expression(rng, 4);
    Expression e = parse(src);
    Expression back = parse(e.to_string());
    for (int j = 0; j < 5; ++j) {
      double r = x(rng), tau = x(rng);
      std::string a = eval_text(e, r, tau);
      std::string b = eval_text(back, r, tau);
      s.check(a == b);
      t.add_row({std::to_string(i), src, format_number(r), format_number(tau),
                 a, b, pass(a == b)});
    }
  }
  s.write("selftest_expressions.csv", t);
}

void periodicity(Suite& s, Rng& rng) {
  CsvTable t({"function", "samples", "max_deviation", "pass"});
  std::uniform_real_distribution<double> x(-50.0, 50.0);
  for (const char* name : {"frac", "tri"}) {
    Expression e = parse(std::string(name) + "(r)");
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      double r = x(rng);
      Bindings a, b;
      a.set(kVarR, r);
      b.set(kVarR, r + 1.0);
      worst = std::max(worst, std::abs(e.evaluate(a) - e.evaluate(b)));
    }
    bool ok = worst <= 1e-12;
    s.check(ok);
    t.add_row({name, "1000", format_number(worst), pass(ok)});
  }
  s.write("selftest_periodicity.csv", t);
}

void identities(Suite& s, Rng& rng) {
  const double budget = 1e-8;
  std::uniform_real_distribution<double> scale(0.5, 10.0);
  std::uniform_real_distribution<double> time(0.2, 5.0);
  std::uniform_real_distribution<double> start(-2.0, 2.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  CsvTable sub({"field", "sigma", "l", "t", "c", "defect", "allowed", "pass"});
  CsvTable osc({"field", "tau", "M", "m", "spread", "pass"});
  CsvTable ord({"field", "tau", "c1", "c2", "shift_error", "order_gap", "pass"});
  int bad_sub = 0, bad_osc = 0, bad_ord = 0;
  for (const char* name : {"harmonic", "sharpness"}) {
    FieldSpec f = catalog(name).field;
    double allowed =
        2.0 * (estimate_sup_norm(f, 64).max() + 1.0) + 6.0 * budget;
    for (int i = 0; i < 50; ++i) {
      double sg = scale(rng), l = scale(rng), t = time(rng), c = start(rng);
      double d = subadditivity_defect(f, sg, l, t, c, budget);
      bool ok = std::abs(d) <= allowed;
      bad_sub += !ok;
      sub.add_row({name, format_number(sg), format_number(l), format_number(t),
                   format_number(c), format_number(d), format_number(allowed),
                   pass(ok)});
    }
    for (int tau = 1; tau <= 10; ++tau) {
      Oscillation o = oscillation(f, tau, 64, budget);
      bool ok = o.M - o.m <= 1.0 + 2.0 * budget;
      bad_osc += !ok;
      osc.add_row({name, std::to_string(tau), format_number(o.M),
                   format_number(o.m), format_number(o.M - o.m), pass(ok)});
    }
    for (int i = 0; i < 50; ++i) {
      double tau = 4.0 * time(rng);
      double c1 = start(rng), c2 = c1 + unit(rng);
      auto end = [&](double c) {
        return solve_rescaled(f, std::span<const double>(&c, 1), tau, budget)
            .final_state()[0];
      };
      double v1 = end(c1), v1s = end(c1 + 1.0), v2 = end(c2);
      double shift = std::abs(v1s - v1 - 1.0);
      double gap = v2 - v1;
      bool ok = shift <= 2.0 * budget && gap >= -2.0 * budget;
      bad_ord += !ok;
      ord.add_row({name, format_number(tau), format_number(c1),
                   format_number(c2), format_number(shift), format_number(gap),
                   pass(ok)});
    }
  }
  s.check(bad_sub == 0);
  s.write("selftest_subadditivity.csv", sub);
  s.check(bad_osc == 0);
  s.write("selftest_oscillation.csv", osc);
  s.check(bad_ord == 0);
  s.write("selftest_comparison.csv", ord);
}

void lambert(Suite& s, Rng& rng) {
  CsvTable t({"x", "w", "scaled_residual", "pass"});
  std::uniform_real_distribution<double> lg(-12.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    double x = std::pow(10.0, lg(rng));
    double w = lambert_w(x);
    double res = std::abs(w * std::exp(w) - x) / std::max(1.0, x);
    bool ok = res <= 1e-12;
    s.check(ok);
    t.add_row({format_number(x), format_number(w), format_number(res), pass(ok)});
  }
  s.write("selftest_lambert.csv", t);
}

void sweeps(Suite& s) {
  for (const char* name : {"harmonic", "sharpness", "coupled-sine"}) {
      SweepTable t = sweep(name, {1e-1, 3e-2, 1e-2}, 5.0, 1e-5);
    s.check(t.valid && t.max_ratio() <= kSafetyFactor);
    s.write(std::string("selftest_sweep_") + name + ".csv", t.csv());
  }
}

void coupled_closed_form(Suite& s) {
  CsvTable t({"epsilon", "t", "u1", "exact", "abs_diff", "pass"});
  CoupledSpec spec = CoupledSpec::make(1.0, 1.0, parse("1"), parse("0"), 0.0, 0.0);
  for (double eps : {1e-1, 1e-2}) {
    CoupledSolution sol = solve_coupled(spec, eps, 1.0, 1e-12);
    for (std::size_t k = 0; k < sol.u1.size(); k += sol.u1.size() / 10) {
      double time = sol.u1.time(k);
      double exact = time / 2.0 + eps / 4.0 * (1.0 - std::exp(-2.0 * time / eps));
      double d = std::abs(sol.u1.state(k)[0] - exact);
      s.check(d <= 1e-9);
      t.add_row({format_number(eps), format_number(time),
                 format_number(sol.u1.state(k)[0]), format_number(exact),
                 format_number(d), pass(d <= 1e-9)});
    }
  }
  s.write("selftest_coupled.csv", t);
}

void diophantine(Suite& s) {
  CsvTable t({"k_max", "worst_ratio", "k1", "k2", "pass"});
  auto xi = golden_frequency();
  for (int k = 1; k <= 20; ++k) {
    DiophantineReport r = check_diophantine(xi, 1.0, k, 0.5);
    s.check(r.passes);
    t.add_row({std::to_string(k), format_number(r.worst_ratio),
               std::to_string(r.worst_k[0]), std::to_string(r.worst_k[1]),
               pass(r.passes)});
  }
  s.write("selftest_diophantine.csv", t);
}

}  // namespace

int run_selftest(std::uint64_t seed, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  Suite s(out_dir);
  // Each group draws from its own stream so groups stay independent.
  Rng g1(seed), g2(seed + 1), g3(seed + 2), g4(seed + 3);
  expressions(s, g1);
  periodicity(s, g2);
  identities(s, g3);
  lambert(s, g4);
  sweeps(s);
  coupled_closed_form(s);
  diophantine(s);
  fmt::print("selftest seed {}: {} failed checks\n", seed, s.failed());
  return s.failed();
}

}  // namespace homoglab::cli
