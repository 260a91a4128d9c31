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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "homoglab/fields.hpp"

namespace homoglab {

struct Scenario {
  std::string name;
  FieldSpec field;
  std::optional<double> expected_fbar;  // scalar scenarios
  std::vector<double> expected_vector;  // vector scenarios
  std::string checks;                   // what the scenario verifies
};

// harmonic, sharpness, qp-cosine, shear-golden, wiggly-gradient,
// free-boundary. Unknown names throw DomainError listing the catalog.
Scenario catalog(std::string_view name);
std::vector<std::string> catalog_names();

inline constexpr double kGolden = 1.6180339887498949;  // (1 + sqrt 5) / 2

// xi = (1, golden mean) and G = 2 + cos(2 pi (v1 + v2)).
std::vector<double> golden_frequency();
ModeMap golden_shear_profile();

// Clamp level of the wiggly-gradient field: sqrt(4 + 1/pi).
double wiggly_clamp();

}  // namespace homoglab
