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

#include "homoglab/coupled.hpp"
#include "homoglab/fields.hpp"
#include "homoglab/transport.hpp"

namespace homoglab {

struct RunSettings {
  std::vector<double> eps;
  std::optional<double> horizon;
  std::optional<double> tol;
  std::optional<double> budget;
  std::vector<double> c;
};

// Shear flow xi / G(v) with G from Fourier modes.
struct HighdimSettings {
  int pairs_per_axis = 4;
  double horizon = 100.0;
  std::vector<double> frequency;
  ModeMap modes;
};

struct TransportSettings {
  Expression phi;
  double lip_phi = 1.0;
  std::vector<GridAxis> grid;
  double t = 1.0;
  std::vector<double> epsilon;
};

struct Config {
  std::string source;
  std::optional<FieldSpec> field;
  bool strict = false;
  std::optional<HighdimSettings> highdim;
  std::optional<CoupledSpec> coupled;
  std::optional<TransportSettings> transport;
  RunSettings run;
};

// Modes are [k1, ..., kn, re, im]; a missing conjugate partner is added.
// Throws ConfigError with the source name and, for syntax errors, the line.
Config parse_config(std::string_view text, std::string_view source = "<string>");
Config load_config(const std::string& path);

}  // namespace homoglab
