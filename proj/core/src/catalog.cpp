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

#include "homoglab/catalog.hpp"

#include <charconv>
#include <cmath>

#include "homoglab/error.hpp"
#include "homoglab/highdim.hpp"

namespace homoglab {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::vector<double> golden_frequency() { return {1.0, kGolden}; }

ModeMap golden_shear_profile() {
  return {{{0, 0}, {2.0, 0.0}}, {{1, 1}, {0.5, 0.0}}, {{-1, -1}, {0.5, 0.0}}};
}

double wiggly_clamp() { return std::sqrt(4.0 + 1.0 / M_PI); }

std::vector<std::string> catalog_names() {
  return {"harmonic",     "sharpness",       "qp-cosine",
          "shear-golden", "wiggly-gradient", "free-boundary"};
}

Scenario catalog(std::string_view name) {
  Scenario s;
  s.name = std::string(name);
  if (name == "harmonic") {
    s.field = FieldSpec::single_scale({parse("2 + sin(2*pi*r)")});
    s.expected_fbar = std::sqrt(3.0);
    s.checks = "single-scale sharp O(eps) rate";
  } else if (name == "sharpness") {
    s.field = FieldSpec::single_scale({parse("tri(r + tau) - 1")});
    s.expected_fbar = -1.0;
    s.checks = "time-dependent O(eps) rate and its sharpness";
  } else if (name == "qp-cosine") {
    ModeMap m = {{{0, 0}, {3.0, 0.0}},  {{1, 0}, {0.5, 0.0}},
                 {{-1, 0}, {0.5, 0.0}}, {{0, 1}, {0.5, 0.0}},
                 {{0, -1}, {0.5, 0.0}}};
    s.field = FieldSpec::quasi_periodic(
        QuasiPeriodicField(golden_frequency(), m, 1.0));
    s.checks = "quasi-periodic uniform-in-time O(eps) rate";
  } else if (name == "shear-golden") {
    auto xi = golden_frequency();
    s.field = shear_field(xi, golden_shear_profile());
    s.expected_vector = {xi[0] / 2.0, xi[1] / 2.0};
    s.checks = "bounded mean motion and rotation vector of a shear flow";
  } else if (name == "wiggly-gradient") {
    std::string B = shortest(wiggly_clamp());
    s.field = FieldSpec::multi_scale(
        parse("-max(-" + B + ", min(" + B + ", u)) - 0.5*sin(2*pi*r)"));
    s.checks = "multi-scale two-regime rate";
  } else if (name == "free-boundary") {
    s.field = FieldSpec::multi_scale(
        parse("(2 + sin(2*pi*r)*cos(2*pi*tau)) / max(u, 0.5)"));
    s.checks = "multi-scale monotone front speed";
  } else {
    std::string names;
    for (const auto& n : catalog_names()) {
      if (!names.empty()) names += ", ";
      names += n;
    }
    throw DomainError("unknown scenario '" + std::string(name) +
                      "'; available: " + names);
  }
  s.field.name = s.name;
  s.field.validate();
  return s;
}

}  // namespace homoglab
