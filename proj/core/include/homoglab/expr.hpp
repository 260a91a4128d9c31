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

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace homoglab {

// Variable slots: r, r1..r8, tau, u, u1..u8, t.
inline constexpr int kNumVars = 20;
inline constexpr int kVarR = 0;
inline constexpr int kVarTau = 9;
inline constexpr int kVarU = 10;
inline constexpr int kVarT = 19;

// Slot of r_i (i in 1..8) and u_i.
constexpr int var_r(int i) { return i; }
constexpr int var_u(int i) { return kVarU + i; }

std::string_view var_name(int slot);
std::optional<int> var_slot(std::string_view name);

struct Bindings {
  std::array<double, kNumVars> values{};
  std::uint32_t mask = 0;

  Bindings& set(int slot, double value) {
    values[slot] = value;
    mask |= 1u << slot;
    return *this;
  }
  Bindings& set(std::string_view name, double value);
};

namespace detail {
struct Node;
struct Instr;
}  // namespace detail

// Immutable parsed expression. Copies share the syntax tree.
class Expression {
 public:
  Expression();  // the constant 0

  static Expression constant(double value);
  static Expression variable(int slot);

  // Throws EvalError on a missing binding, division by zero or a
  // non-finite result.
  double evaluate(const Bindings& b) const;
  // Same, without the binding check. values must hold kNumVars entries.
  double evaluate_unchecked(const double* values) const;

  std::uint32_t free_vars() const { return free_vars_; }
  bool depends_on(int slot) const { return (free_vars_ >> slot) & 1u; }
  bool is_constant() const { return free_vars_ == 0; }

  const std::string& source() const { return source_; }
  // Fully parenthesized; parses back to an identically evaluating tree.
  std::string to_string() const;

  // Replaces every occurrence of the variable with replacement.
  Expression substitute(int slot, const Expression& replacement) const;

  friend Expression operator-(const Expression& a);
  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);

 private:
  friend Expression parse(std::string_view source);
  explicit Expression(std::shared_ptr<const detail::Node> root,
                      std::string source);
  void compile();

  std::shared_ptr<const detail::Node> root_;
  std::shared_ptr<const std::vector<detail::Instr>> code_;
  std::string source_;
  std::uint32_t free_vars_ = 0;
  int stack_depth_ = 0;
};

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'pi' | variable | func '(' args ')' | '(' expr ')'
// Functions: sin cos abs exp frac tri (one argument), min max (two).
// frac(x) = x - floor(x); tri(x) = |frac(x) - 1/2|.
Expression parse(std::string_view source);

double frac(double x);
double tri(double x);

struct PeriodicityReport {
  double max_deviation = 0.0;
  std::size_t samples = 0;
};

// Sampling range per slot; defaults to [0, 1].
struct SampleBox {
  std::array<double, kNumVars> lo{};
  std::array<double, kNumVars> hi;
  SampleBox() { hi.fill(1.0); }
};

// max |e(p + e_var) - e(p)| over n_samples deterministic points p.
PeriodicityReport check_periodicity(const Expression& e, int slot,
                                    std::size_t n_samples,
                                    const SampleBox& box = SampleBox(),
                                    std::uint64_t seed = 0x5eed);

}  // namespace homoglab
