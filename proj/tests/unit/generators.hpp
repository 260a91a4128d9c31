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

#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace homoglab::testing {

inline constexpr std::uint64_t kSeed = 0x68676c6162;

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int pick(Rng& rng, int n) {
  return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

// Random well-formed expression over r and tau.
inline std::string random_expression(Rng& rng, int depth) {
  static const char* kLeaves[] = {"r", "tau", "pi", "0.5", "2", "1e-3", "7.25"};
  static const char* kUnary[] = {"sin", "cos", "abs", "frac", "tri"};
  static const char* kBinary[] = {"+", "-", "*", "/"};
  if (depth <= 0 || pick(rng, 5) == 0) return kLeaves[pick(rng, 7)];
  switch (pick(rng, 5)) {
    case 0:
      return std::string(kUnary[pick(rng, 5)]) + "(" +
             random_expression(rng, depth - 1) + ")";
    case 1:
      return std::string(pick(rng, 2) ? "min" : "max") + "(" +
             random_expression(rng, depth - 1) + "," +
             random_expression(rng, depth - 1) + ")";
    case 2:
      return "-" + random_expression(rng, depth - 1);
    default:
      return random_expression(rng, depth - 1) + kBinary[pick(rng, 4)] +
             random_expression(rng, depth - 1);
  }
}

}  // namespace homoglab::testing
