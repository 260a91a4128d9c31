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

#include "homoglab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "homoglab/error.hpp"

namespace homoglab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr std::size_t kMaxGridPoints = std::size_t{1} << 18;

bool is_zero(const std::vector<int>& k) {
  return std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
}

// First nonzero component positive.
bool is_upper_half(const std::vector<int>& k) {
  for (int x : k) {
    if (x != 0) return x > 0;
  }
  return false;
}

std::vector<int> negated(std::vector<int> k) {
  for (int& x : k) x = -x;
  return k;
}

std::string format_k(const std::vector<int>& k) {
  std::string s = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(k[i]);
  }
  return s + ")";
}

// Calls fn(point) on a grid^d lattice of [0,1)^d, or on kMaxGridPoints
// fixed-seed random points when the lattice is too large.
template <class Fn>
void for_each_cell_point(int d, int grid, Fn&& fn) {
  std::vector<double> p(d);
  double total = std::pow(static_cast<double>(grid), d);
  if (d == 0) {
    fn(p);
    return;
  }
  if (total > static_cast<double>(kMaxGridPoints)) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t s = 0; s < kMaxGridPoints; ++s) {
      for (double& x : p) x = unit(rng);
      fn(p);
    }
    return;
  }
  std::vector<int> idx(d, 0);
  for (;;) {
    for (int i = 0; i < d; ++i) p[i] = static_cast<double>(idx[i]) / grid;
    fn(p);
    int i = 0;
    while (i < d && ++idx[i] == grid) idx[i++] = 0;
    if (i == d) break;
  }
}

// Argument slots actually used by the components, and their ranges.
struct Axis {
  std::vector<int> slots;  // all slots bound to this coordinate
  double lo = 0.0;
  double hi = 1.0;
};

std::vector<Axis> field_axes(const FieldSpec& f) {
  std::uint32_t used = 0;
  for (const auto& c : f.components()) used |= c.free_vars();
  std::vector<Axis> axes;
  auto uses = [&](int slot) { return (used >> slot) & 1u; };
  if (f.kind() == FieldKind::SingleScale) {
    if (f.dimension() == 1) {
      if (uses(kVarR) || uses(var_r(1))) axes.push_back({{kVarR, var_r(1)}});
    } else {
      for (int i = 1; i <= f.dimension(); ++i) {
        if (uses(var_r(i))) axes.push_back({{var_r(i)}});
      }
    }
    if (uses(kVarTau)) axes.push_back({{kVarTau}});
  } else if (f.kind() == FieldKind::MultiScale) {
    const UTBox& b = f.box();
    if (uses(kVarR) || uses(var_r(1))) axes.push_back({{kVarR, var_r(1)}});
    if (uses(kVarTau)) axes.push_back({{kVarTau}});
    if (uses(kVarU) || uses(var_u(1))) {
      axes.push_back({{kVarU, var_u(1)}, b.u_lo, b.u_hi});
    }
    if (uses(kVarT)) axes.push_back({{kVarT}, b.t_lo, b.t_hi});
  }
  return axes;
}

void bind_point(const std::vector<Axis>& axes, const std::vector<double>& p,
                double* vals) {
  for (std::size_t a = 0; a < axes.size(); ++a) {
    double x = axes[a].lo + (axes[a].hi - axes[a].lo) * p[a];
    for (int s : axes[a].slots) vals[s] = x;
  }
}

void check_allowed(const Expression& e, std::uint32_t allowed,
                   std::string_view kind) {
  std::uint32_t bad = e.free_vars() & ~allowed;
  for (int i = 0; i < kNumVars; ++i) {
    if ((bad >> i) & 1u) {
      throw DomainError("variable '" + std::string(var_name(i)) +
                        "' is not allowed in a " + std::string(kind) +
                        " field component '" + e.source() + "'");
    }
  }
}

}  // namespace

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::SingleScale: return "single-scale";
    case FieldKind::MultiScale: return "multi-scale";
    case FieldKind::QuasiPeriodic: return "quasi-periodic";
  }
  return "?";
}

FieldKind parse_field_kind(std::string_view text) {
  if (text == "single-scale") return FieldKind::SingleScale;
  if (text == "multi-scale") return FieldKind::MultiScale;
  if (text == "quasi-periodic") return FieldKind::QuasiPeriodic;
  throw ConfigError("unknown field kind '" + std::string(text) +
                    "' (expected single-scale, multi-scale or quasi-periodic)");
}

QuasiPeriodicField::QuasiPeriodicField(std::vector<double> frequency,
                                       ModeMap modes, double sigma,
                                       std::optional<double> c_xi)
    : frequency_(std::move(frequency)),
      modes_(std::move(modes)),
      sigma_(sigma),
      c_xi_(c_xi) {
  for (const auto& [k, c] : modes_) {
    if (k.size() != frequency_.size()) {
      throw DomainError("mode " + format_k(k) +
                        " does not match the torus dimension " +
                        std::to_string(frequency_.size()));
    }
    if (is_zero(k)) {
      c0_ = c.real();
    } else if (is_upper_half(k)) {
      HalfMode h;
      h.k = k;
      h.re = c.real();
      h.im = c.imag();
      for (std::size_t i = 0; i < k.size(); ++i) {
        h.line_freq += k[i] * frequency_[i];
      }
      half_.push_back(std::move(h));
    }
  }
}

std::complex<double> QuasiPeriodicField::coefficient(
    const std::vector<int>& k) const {
  auto it = modes_.find(k);
  return it == modes_.end() ? std::complex<double>() : it->second;
}

std::complex<double> QuasiPeriodicField::evaluate_torus_complex(
    std::span<const double> xi) const {
  std::complex<double> s;
  for (const auto& [k, c] : modes_) {
    double dot = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) dot += k[i] * xi[i];
    s += c * std::polar(1.0, kTwoPi * dot);
  }
  return s;
}

double QuasiPeriodicField::evaluate_torus(std::span<const double> xi) const {
  double s = c0_;
  for (const auto& h : half_) {
    double dot = 0.0;
    for (std::size_t i = 0; i < h.k.size(); ++i) dot += h.k[i] * xi[i];
    double th = kTwoPi * dot;
    s += 2.0 * (h.re * std::cos(th) - h.im * std::sin(th));
  }
  return s;
}

double QuasiPeriodicField::evaluate_line(double r) const {
  double s = c0_;
  for (const auto& h : half_) {
    double th = kTwoPi * h.line_freq * r;
    s += 2.0 * (h.re * std::cos(th) - h.im * std::sin(th));
  }
  return s;
}

double QuasiPeriodicField::derivative_line(double r) const {
  double s = 0.0;
  for (const auto& h : half_) {
    double w = kTwoPi * h.line_freq;
    double th = w * r;
    s -= 2.0 * w * (h.re * std::sin(th) + h.im * std::cos(th));
  }
  return s;
}

double QuasiPeriodicField::directional_derivative(
    std::span<const double> xi) const {
  double s = 0.0;
  for (const auto& h : half_) {
    double dot = 0.0;
    for (std::size_t i = 0; i < h.k.size(); ++i) dot += h.k[i] * xi[i];
    double th = kTwoPi * dot;
    double w = kTwoPi * h.line_freq;
    s -= 2.0 * w * (h.re * std::sin(th) + h.im * std::cos(th));
  }
  return s;
}

void QuasiPeriodicField::validate() const {
  int n = torus_dim();
  if (n < 1 || n > 4) {
    throw DomainError("quasi-periodic torus dimension must be in 1..4");
  }
  if (std::all_of(frequency_.begin(), frequency_.end(),
                  [](double x) { return x == 0.0; })) {
    throw DomainError("frequency vector is zero");
  }
  for (const auto& [k, c] : modes_) {
    auto partner = coefficient(negated(k));
    if (std::abs(partner - std::conj(c)) > 1e-12) {
      throw DomainError("mode " + format_k(k) +
                        " lacks its conjugate partner " +
                        format_k(negated(k)));
    }
  }
  double min_f = INFINITY;
  std::vector<double> xi(n);
  for_each_cell_point(n, 32, [&](const std::vector<double>& p) {
    auto z = evaluate_torus_complex(p);
    if (std::abs(z.imag()) > 1e-12) {
      throw DomainError("quasi-periodic field is not real-valued");
    }
    min_f = std::min(min_f, z.real());
  });
  if (!(min_f > 0.0)) {
    throw DomainError("quasi-periodic field is not strictly positive (min " +
                      std::to_string(min_f) + ")");
  }
}

FieldSpec FieldSpec::single_scale(std::vector<Expression> components) {
  if (components.empty() || components.size() > 8) {
    throw DomainError("single-scale fields need 1..8 components");
  }
  FieldSpec f;
  f.kind_ = FieldKind::SingleScale;
  f.dimension_ = static_cast<int>(components.size());
  f.components_ = std::move(components);
  std::uint32_t allowed = 1u << kVarTau;
  if (f.dimension_ == 1) {
    allowed |= (1u << kVarR) | (1u << var_r(1));
  } else {
    for (int i = 1; i <= f.dimension_; ++i) allowed |= 1u << var_r(i);
  }
  for (const auto& c : f.components_) check_allowed(c, allowed, "single-scale");
  return f;
}

FieldSpec FieldSpec::multi_scale(Expression e, UTBox box) {
  if (!(box.u_lo < box.u_hi) || !(box.t_lo < box.t_hi)) {
    throw DomainError("empty u/t sampling box");
  }
  FieldSpec f;
  f.kind_ = FieldKind::MultiScale;
  f.dimension_ = 1;
  f.box_ = box;
  std::uint32_t allowed = (1u << kVarR) | (1u << var_r(1)) | (1u << kVarTau) |
                          (1u << kVarU) | (1u << var_u(1)) | (1u << kVarT);
  check_allowed(e, allowed, "multi-scale");
  f.components_.push_back(std::move(e));
  return f;
}

FieldSpec FieldSpec::quasi_periodic(QuasiPeriodicField qp) {
  FieldSpec f;
  f.kind_ = FieldKind::QuasiPeriodic;
  f.dimension_ = 1;
  f.qp_ = std::move(qp);
  return f;
}

bool FieldSpec::autonomous() const {
  if (kind_ == FieldKind::QuasiPeriodic) return true;
  for (const auto& c : components_) {
    if (c.depends_on(kVarTau)) return false;
    if (kind_ == FieldKind::MultiScale && c.depends_on(kVarT)) return false;
  }
  return true;
}

void FieldSpec::eval_fast(double tau, const double* r, double* out) const {
  if (kind_ == FieldKind::QuasiPeriodic) {
    out[0] = qp_->evaluate_line(r[0]);
    return;
  }
  double vals[kNumVars] = {};
  if (dimension_ == 1) {
    vals[kVarR] = r[0];
    vals[var_r(1)] = r[0];
  } else {
    for (int i = 0; i < dimension_; ++i) vals[var_r(i + 1)] = r[i];
  }
  vals[kVarTau] = tau;
  for (int i = 0; i < dimension_; ++i) {
    out[i] = components_[i].evaluate_unchecked(vals);
  }
}

double FieldSpec::eval_multi(double r, double tau, double u, double t) const {
  double vals[kNumVars] = {};
  vals[kVarR] = r;
  vals[var_r(1)] = r;
  vals[kVarTau] = tau;
  vals[kVarU] = u;
  vals[var_u(1)] = u;
  vals[kVarT] = t;
  return components_[0].evaluate_unchecked(vals);
}

void FieldSpec::validate(const ValidationOptions& opts) const {
  if (kind_ == FieldKind::QuasiPeriodic) {
    qp_->validate();
    return;
  }
  SampleBox sb;
  if (kind_ == FieldKind::MultiScale) {
    sb.lo[kVarU] = sb.lo[var_u(1)] = box_.u_lo;
    sb.hi[kVarU] = sb.hi[var_u(1)] = box_.u_hi;
    sb.lo[kVarT] = box_.t_lo;
    sb.hi[kVarT] = box_.t_hi;
  }
  std::vector<int> periodic = {kVarTau};
  if (dimension_ == 1) {
    periodic.push_back(kVarR);
    periodic.push_back(var_r(1));
  } else {
    for (int i = 1; i <= dimension_; ++i) periodic.push_back(var_r(i));
  }
  for (const auto& c : components_) {
    for (int slot : periodic) {
      if (!c.depends_on(slot)) continue;
      auto rep = check_periodicity(c, slot, opts.samples, sb);
      if (rep.max_deviation > opts.tolerance) {
        throw DomainError("component '" + c.source() +
                          "' is not 1-periodic in " +
                          std::string(var_name(slot)) + " (deviation " +
                          std::to_string(rep.max_deviation) + ")");
      }
    }
  }
  if (kind_ != FieldKind::MultiScale) return;

  const Expression& e = components_[0];
  std::mt19937_64 rng(0x6d6f6e6fULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double steps[] = {(box_.u_hi - box_.u_lo) / 64.0, 1e-3};
  for (std::size_t s = 0; s < opts.samples; ++s) {
    double r = unit(rng);
    double tau = unit(rng);
    double t = box_.t_lo + (box_.t_hi - box_.t_lo) * unit(rng);
    double u = box_.u_lo + (box_.u_hi - box_.u_lo) * unit(rng);
    for (double du : steps) {
      double u2 = std::min(u + du, box_.u_hi);
      double diff = eval_multi(r, tau, u2, t) - eval_multi(r, tau, u, t);
      if (diff > opts.tolerance) {
        throw DomainError("multi-scale field '" + e.source() +
                          "' is increasing in u near u=" + std::to_string(u));
      }
    }
  }

  if (opts.strict_bounded) {
    UTBox wide = box_;
    double hu = box_.u_hi - box_.u_lo;
    double ht = box_.t_hi - box_.t_lo;
    wide.u_lo -= hu / 2;
    wide.u_hi += hu / 2;
    wide.t_lo -= ht / 2;
    wide.t_hi += ht / 2;
    double inner = estimate_sup_norm(*this, 32).sampled[0];
    FieldSpec outer = multi_scale(e, wide);
    double outside = estimate_sup_norm(outer, 64).sampled[0];
    if (outside > inner * (1.0 + 1e-6) + opts.tolerance) {
      throw DomainError("multi-scale field '" + e.source() +
                        "' grows outside the declared u/t box (sup " +
                        std::to_string(outside) + " vs " +
                        std::to_string(inner) + ")");
    }
  }
}

double SupNormEstimate::max() const {
  double m = 0.0;
  for (double v : value) m = std::max(m, v);
  return m;
}

LipschitzEstimate estimate_lipschitz(const FieldSpec& field,
                                     int grid_per_axis) {
  if (grid_per_axis < 8) throw DomainError("grid_per_axis must be >= 8");
  LipschitzEstimate est;
  const double h = 1.0 / grid_per_axis;
  if (field.kind() == FieldKind::QuasiPeriodic) {
    const auto& qp = *field.qp();
    for_each_cell_point(qp.torus_dim(), grid_per_axis,
                        [&](const std::vector<double>& p) {
                          est.sampled = std::max(
                              est.sampled,
                              std::abs(qp.directional_derivative(p)));
                        });
  } else {
    auto axes = field_axes(field);
    int d = static_cast<int>(axes.size());
    double vals[kNumVars] = {};
    for_each_cell_point(d, grid_per_axis, [&](const std::vector<double>& p) {
      bind_point(axes, p, vals);
      for (int a = 0; a < d; ++a) {
        double x = vals[axes[a].slots[0]];
        for (const auto& c : field.components()) {
          for (int s : axes[a].slots) vals[s] = x + h;
          double fp = c.evaluate_unchecked(vals);
          for (int s : axes[a].slots) vals[s] = x - h;
          double fm = c.evaluate_unchecked(vals);
          est.sampled = std::max(est.sampled, std::abs(fp - fm) / (2.0 * h));
        }
        for (int s : axes[a].slots) vals[s] = x;
      }
    });
  }
  est.declared = field.declared_kappa.has_value();
  est.value = est.declared ? *field.declared_kappa : est.sampled;
  return est;
}

SupNormEstimate estimate_sup_norm(const FieldSpec& field, int grid_per_axis) {
  if (grid_per_axis < 8) throw DomainError("grid_per_axis must be >= 8");
  SupNormEstimate est;
  est.sampled.assign(field.dimension(), 0.0);
  if (field.kind() == FieldKind::QuasiPeriodic) {
    const auto& qp = *field.qp();
    for_each_cell_point(qp.torus_dim(), grid_per_axis,
                        [&](const std::vector<double>& p) {
                          est.sampled[0] = std::max(
                              est.sampled[0], std::abs(qp.evaluate_torus(p)));
                        });
  } else {
    auto axes = field_axes(field);
    double vals[kNumVars] = {};
    int d = static_cast<int>(axes.size());
    for_each_cell_point(d, grid_per_axis, [&](const std::vector<double>& p) {
      bind_point(axes, p, vals);
      for (int i = 0; i < field.dimension(); ++i) {
        est.sampled[i] = std::max(
            est.sampled[i],
            std::abs(field.components()[i].evaluate_unchecked(vals)));
      }
    });
    // Far edges of the u/t box; the periodic axes repeat at 1.
    for (int a = 0; a < d; ++a) {
      if (axes[a].lo == 0.0 && axes[a].hi == 1.0) continue;
      std::vector<double> p(d, 0.0);
      p[a] = 1.0;
      bind_point(axes, p, vals);
      for (int i = 0; i < field.dimension(); ++i) {
        est.sampled[i] = std::max(
            est.sampled[i],
            std::abs(field.components()[i].evaluate_unchecked(vals)));
      }
    }
  }
  est.declared = field.declared_sup.has_value();
  est.value = est.sampled;
  if (est.declared) {
    for (double& v : est.value) v = *field.declared_sup;
  }
  return est;
}

}  // namespace homoglab
