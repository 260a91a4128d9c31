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

#include "homoglab/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "homoglab/error.hpp"

namespace homoglab {

namespace {

constexpr std::size_t kMaxPanels = 1u << 16;

}  // namespace

// Bisection over single GK15 panels. Boost's own recursion compares an
// error estimate taken on [-1, 1] with a tolerance in x units, which never
// terminates on short intervals, so only its panel rule is used.
QuadResult integrate_adaptive(const std::function<double(double)>& f,
                              double a, double b, double abs_tol,
                              unsigned max_depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  if (!(abs_tol > 0.0)) throw DomainError("quadrature tolerance must be > 0");
  QuadResult r;
  if (a == b) return r;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  struct Panel {
    double lo, hi, tol;
    unsigned depth;
  };
  std::vector<Panel> stack = {{a, b, abs_tol, 0}};
  std::size_t panels = 0;
  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    if (++panels > kMaxPanels) {
      throw IntegrationError("adaptive quadrature exceeded " +
                             std::to_string(kMaxPanels) + " panels");
    }
    double err = 0.0, l1 = 0.0;
    double v = GK::integrate(f, p.lo, p.hi, 0, 0.0, &err, &l1);
    err *= std::abs(p.hi - p.lo) / 2.0;
    bool ok = err <= p.tol || err <= 16.0 * kEps * l1;
    if (!ok && p.depth < max_depth) {
      double mid = p.lo + (p.hi - p.lo) / 2.0;
      stack.push_back({mid, p.hi, p.tol / 2.0, p.depth + 1});
      stack.push_back({p.lo, mid, p.tol / 2.0, p.depth + 1});
      continue;
    }
    if (!ok) {
      throw IntegrationError("adaptive quadrature did not reach tolerance " +
                             std::to_string(abs_tol) + " on [" +
                             std::to_string(p.lo) + ", " +
                             std::to_string(p.hi) + "]");
    }
    r.value += v;
    r.error += err;
    r.l1 += l1;
  }
  if (!std::isfinite(r.value)) {
    throw IntegrationError("adaptive quadrature produced a non-finite value");
  }
  return r;
}

}  // namespace homoglab
