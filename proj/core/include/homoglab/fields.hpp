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

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homoglab/expr.hpp"

namespace homoglab {

enum class FieldKind { SingleScale, MultiScale, QuasiPeriodic };

std::string_view to_string(FieldKind kind);
// Accepts "single-scale", "multi-scale", "quasi-periodic".
FieldKind parse_field_kind(std::string_view text);

using ModeMap = std::map<std::vector<int>, std::complex<double>>;

// F(xi) = sum_k c_k exp(2 pi i k.xi) with finitely many modes, sampled
// along the line xi = frequency * r.
class QuasiPeriodicField {
 public:
  QuasiPeriodicField() = default;
  QuasiPeriodicField(std::vector<double> frequency, ModeMap modes,
                     double sigma = 1.0,
                     std::optional<double> c_xi = std::nullopt);

  int torus_dim() const { return static_cast<int>(frequency_.size()); }
  const std::vector<double>& frequency() const { return frequency_; }
  const ModeMap& modes() const { return modes_; }
  double sigma() const { return sigma_; }
  std::optional<double> c_xi() const { return c_xi_; }

  std::complex<double> coefficient(const std::vector<int>& k) const;
  double mean() const { return coefficient(std::vector<int>(torus_dim(), 0)).real(); }

  // Full complex sum, used to check that F is real.
  std::complex<double> evaluate_torus_complex(std::span<const double> xi) const;
  // Real part via the conjugate-pair form.
  double evaluate_torus(std::span<const double> xi) const;
  double evaluate_line(double r) const;
  // d/dr F(frequency * r).
  double derivative_line(double r) const;
  // Directional derivative frequency . grad F at a torus point.
  double directional_derivative(std::span<const double> xi) const;

  // Conjugate symmetry, realness to 1e-12 and positivity on a 32^n grid.
  void validate() const;

 private:
  struct HalfMode {
    std::vector<int> k;
    double re = 0.0;
    double im = 0.0;
    double line_freq = 0.0;  // k . frequency
  };

  std::vector<double> frequency_;
  ModeMap modes_;
  double sigma_ = 1.0;
  std::optional<double> c_xi_;
  double c0_ = 0.0;
  std::vector<HalfMode> half_;
};

// Sampling box for u and t in multi-scale fields.
struct UTBox {
  double u_lo = -10.0;
  double u_hi = 10.0;
  double t_lo = -10.0;
  double t_hi = 10.0;
};

struct ValidationOptions {
  // Also reject multi-scale fields that grow outside the declared box.
  bool strict_bounded = false;
  double tolerance = 1e-9;
  std::size_t samples = 512;
};

// Oscillatory right-hand side. Single-scale components are functions of
// r (or r1..rn) and tau; a multi-scale field is scalar in r, tau, u, t.
class FieldSpec {
 public:
  FieldSpec() = default;

  static FieldSpec single_scale(std::vector<Expression> components);
  static FieldSpec multi_scale(Expression f, UTBox box = UTBox());
  static FieldSpec quasi_periodic(QuasiPeriodicField qp);

  FieldKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const std::vector<Expression>& components() const { return components_; }
  const QuasiPeriodicField* qp() const { return qp_ ? &*qp_ : nullptr; }
  const UTBox& box() const { return box_; }

  std::optional<double> declared_kappa;
  std::optional<double> declared_sup;
  std::string name;

  // No dependence on tau (and, for multi-scale fields, on t).
  bool autonomous() const;

  // Single-scale and quasi-periodic: out = f(r, tau).
  void eval_fast(double tau, const double* r, double* out) const;
  // Multi-scale: f(r, tau, u, t).
  double eval_multi(double r, double tau, double u, double t) const;

  // Throws DomainError describing the first failed invariant.
  void validate(const ValidationOptions& opts = ValidationOptions()) const;

 private:
  FieldKind kind_ = FieldKind::SingleScale;
  int dimension_ = 0;
  std::vector<Expression> components_;
  std::optional<QuasiPeriodicField> qp_;
  UTBox box_;
};

struct LipschitzEstimate {
  double value = 0.0;    // declared value if set, else sampled
  double sampled = 0.0;
  bool declared = false;
};

struct SupNormEstimate {
  std::vector<double> value;  // per component
  std::vector<double> sampled;
  bool declared = false;
  double max() const;
};

inline constexpr double kSafetyFactor = 1.05;

LipschitzEstimate estimate_lipschitz(const FieldSpec& field,
                                     int grid_per_axis);
SupNormEstimate estimate_sup_norm(const FieldSpec& field, int grid_per_axis);

}  // namespace homoglab
