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

#include <benchmark/benchmark.h>

#include <vector>

#include "homoglab/catalog.hpp"
#include "homoglab/effective.hpp"
#include "homoglab/expr.hpp"
#include "homoglab/integrate.hpp"
#include "homoglab/quasiperiodic.hpp"

namespace {

using namespace homoglab;

void BM_ExprEval(benchmark::State& state) {
  FieldSpec f = catalog("harmonic").field;
  double r = 0.1, out = 0.0;
  for (auto _ : state) {
    f.eval_fast(0.0, &r, &out);
    r += 1e-3;
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_ExprEval);

void BM_SolveHarmonic(benchmark::State& state) {
  FieldSpec f = catalog("harmonic").field;
  double eps = 1.0 / static_cast<double>(state.range(0));
  std::vector<double> c = {0.0};
  for (auto _ : state) {
    Trajectory tr = solve_fast(f, eps, c, 1.0, 1e-3 * eps);
    benchmark::DoNotOptimize(tr.final_state()[0]);
  }
}
BENCHMARK(BM_SolveHarmonic)->Arg(10)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LambertW(benchmark::State& state) {
  double x = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w(x));
    x *= 1.0001;
    if (x > 1e6) x = 1e-6;
  }
}
BENCHMARK(BM_LambertW);

void BM_HarmonicMean(benchmark::State& state) {
  FieldSpec f = catalog("harmonic").field;
  for (auto _ : state) benchmark::DoNotOptimize(effective_constant(f, 1e-10).scalar());
}
BENCHMARK(BM_HarmonicMean);

void BM_Diophantine(benchmark::State& state) {
  auto xi = golden_frequency();
  for (auto _ : state)
    benchmark::DoNotOptimize(check_diophantine(xi, 1.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Diophantine)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
