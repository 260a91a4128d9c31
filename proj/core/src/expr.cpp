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

#include "homoglab/expr.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <system_error>

#include "homoglab/error.hpp"

namespace homoglab {

namespace {

constexpr std::array<std::string_view, kNumVars> kVarNames = {
    "r",  "r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8", "tau",
    "u",  "u1", "u2", "u3", "u4", "u5", "u6", "u7", "u8", "t"};

enum class Func : std::uint8_t { Sin, Cos, Abs, Exp, Frac, Tri, Min, Max };

struct FuncInfo {
  std::string_view name;
  Func func;
  int arity;
};

constexpr std::array<FuncInfo, 8> kFuncs = {{{"sin", Func::Sin, 1},
                                             {"cos", Func::Cos, 1},
                                             {"abs", Func::Abs, 1},
                                             {"exp", Func::Exp, 1},
                                             {"frac", Func::Frac, 1},
                                             {"tri", Func::Tri, 1},
                                             {"min", Func::Min, 2},
                                             {"max", Func::Max, 2}}};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncs) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view func_name(Func f) {
  return kFuncs[static_cast<int>(f)].name;
}

}  // namespace

namespace detail {

enum class Kind : std::uint8_t { Num, Pi, Var, Neg, Add, Sub, Mul, Div, Call };

struct Node {
  Kind kind = Kind::Num;
  double value = 0.0;
  int slot = 0;
  Func func = Func::Sin;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

enum class Op : std::uint8_t {
  Const, Load, Neg, Add, Sub, Mul, Div, Sin, Cos, Abs, Exp, Frac, Tri, Min, Max
};

struct Instr {
  Op op;
  int slot;
  double value;
};

}  // namespace detail

using detail::Instr;
using detail::Kind;
using detail::Node;
using detail::Op;
using NodePtr = std::shared_ptr<const Node>;

double frac(double x) { return x - std::floor(x); }
double tri(double x) { return std::abs(frac(x) - 0.5); }

std::string_view var_name(int slot) { return kVarNames.at(slot); }

std::optional<int> var_slot(std::string_view name) {
  for (int i = 0; i < kNumVars; ++i) {
    if (kVarNames[i] == name) return i;
  }
  return std::nullopt;
}

Bindings& Bindings::set(std::string_view name, double value) {
  auto slot = var_slot(name);
  if (!slot) throw EvalError("unknown variable '" + std::string(name) + "'");
  return set(*slot, value);
}

namespace {

NodePtr make_num(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Num;
  n->value = v;
  return n;
}

NodePtr make_var(int slot) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->slot = slot;
  return n;
}

NodePtr make_node(Kind k, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(Func f, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

std::uint32_t collect_vars(const Node& n) {
  std::uint32_t m = n.kind == Kind::Var ? (1u << n.slot) : 0u;
  if (n.a) m |= collect_vars(*n.a);
  if (n.b) m |= collect_vars(*n.b);
  return m;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Num:
      if (std::signbit(n.value)) {
        out += "(-";
        out += format_double(-n.value);
        out += ')';
      } else {
        out += format_double(n.value);
      }
      return;
    case Kind::Pi:
      out += "pi";
      return;
    case Kind::Var:
      out += kVarNames[n.slot];
      return;
    case Kind::Neg:
      out += "(-";
      print(*n.a, out);
      out += ')';
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      static constexpr char kOps[] = {'+', '-', '*', '/'};
      out += '(';
      print(*n.a, out);
      out += ' ';
      out += kOps[static_cast<int>(n.kind) - static_cast<int>(Kind::Add)];
      out += ' ';
      print(*n.b, out);
      out += ')';
      return;
    }
    case Kind::Call:
      out += func_name(n.func);
      out += '(';
      print(*n.a, out);
      if (n.b) {
        out += ", ";
        print(*n.b, out);
      }
      out += ')';
      return;
  }
}

NodePtr substitute_node(const NodePtr& n, int slot, const NodePtr& repl) {
  if (n->kind == Kind::Var) return n->slot == slot ? repl : n;
  if (!n->a) return n;
  NodePtr a = substitute_node(n->a, slot, repl);
  NodePtr b = n->b ? substitute_node(n->b, slot, repl) : nullptr;
  if (a == n->a && b == n->b) return n;
  auto copy = std::make_shared<Node>(*n);
  copy->a = std::move(a);
  copy->b = std::move(b);
  return copy;
}

// Recursive-descent parser over a byte string.
class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) {
      fail("unexpected input", {"operator", "end of input"});
    }
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg,
                         std::vector<std::string> expected) const {
    fail_at(pos_, msg, std::move(expected));
  }

  [[noreturn]] void fail_at(std::size_t at, const std::string& msg,
                            std::vector<std::string> expected) const {
    std::string what = "syntax error at offset " + std::to_string(at) +
                       ": " + msg + "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) what += " or ";
      what += expected[i];
    }
    throw ParseError(what, at, std::move(expected));
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
            src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail("missing '" + std::string(1, c) + "'", {std::string("'") + c + "'"});
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Kind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = make_node(Kind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Kind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_node(Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make_node(Kind::Neg, parse_unary());
    return parse_primary();
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool is_ident(char c) { return is_ident_start(c) || is_digit(c); }

  NodePtr parse_primary() {
    skip_ws();
    static const std::vector<std::string> kPrimary = {
        "number", "identifier", "'('", "'-'"};
    if (pos_ >= src_.size()) fail("unexpected end of input", kPrimary);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() &&
                        is_digit(src_[pos_ + 1]))) {
      return parse_number();
    }
    if (is_ident_start(c)) return parse_identifier();
    fail(std::string("unexpected character '") + c + "'", kPrimary);
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      } else {
        pos_ = save;
      }
    }
    std::string_view text = src_.substr(start, pos_ - start);
    // from_chars rejects a leading '.', so parse "0" + text in that case.
    std::string buf = text.front() == '.' ? "0" + std::string(text)
                                          : std::string(text);
    double v = 0.0;
    auto res = std::from_chars(buf.data(), buf.data() + buf.size(), v);
    if (res.ec != std::errc() || !std::isfinite(v)) {
      fail_at(start, "invalid number literal", {"finite number"});
    }
    return make_num(v);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident(src_[pos_])) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);
    if (name == "pi") {
      auto n = std::make_shared<Node>();
      n->kind = Kind::Pi;
      n->value = M_PI;
      return n;
    }
    if (auto slot = var_slot(name)) return make_var(*slot);
    const FuncInfo* f = find_func(name);
    if (!f) {
      fail_at(start, "unknown identifier '" + std::string(name) + "'",
              {"variable", "function", "'pi'"});
    }
    expect('(');
    std::vector<NodePtr> args;
    args.push_back(parse_expr());
    while (accept(',')) args.push_back(parse_expr());
    expect(')');
    if (static_cast<int>(args.size()) != f->arity) {
      fail_at(start,
              "function '" + std::string(name) + "' takes " +
                  std::to_string(f->arity) + " argument(s), got " +
                  std::to_string(args.size()),
              {std::to_string(f->arity) + " argument(s)"});
    }
    return make_call(f->func, args[0], args.size() > 1 ? args[1] : nullptr);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

[[noreturn]] void throw_div_zero() {
  throw EvalError("division by zero");
}

double apply_func(Func f, double x, double y) {
  switch (f) {
    case Func::Sin: return std::sin(x);
    case Func::Cos: return std::cos(x);
    case Func::Abs: return std::abs(x);
    case Func::Exp: return std::exp(x);
    case Func::Frac: return frac(x);
    case Func::Tri: return tri(x);
    case Func::Min: return std::min(x, y);
    case Func::Max: return std::max(x, y);
  }
  return 0.0;
}

Op func_op(Func f) {
  return static_cast<Op>(static_cast<int>(Op::Sin) + static_cast<int>(f));
}

// Evaluates a variable-free subtree; nullopt if it would raise.
std::optional<double> fold(const Node& n) {
  switch (n.kind) {
    case Kind::Num:
    case Kind::Pi:
      return n.value;
    case Kind::Var:
      return std::nullopt;
    case Kind::Neg: {
      auto a = fold(*n.a);
      if (!a) return std::nullopt;
      return -*a;
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      auto a = fold(*n.a);
      auto b = fold(*n.b);
      if (!a || !b) return std::nullopt;
      double r = 0.0;
      if (n.kind == Kind::Add) r = *a + *b;
      if (n.kind == Kind::Sub) r = *a - *b;
      if (n.kind == Kind::Mul) r = *a * *b;
      if (n.kind == Kind::Div) {
        if (*b == 0.0) return std::nullopt;
        r = *a / *b;
      }
      if (!std::isfinite(r)) return std::nullopt;
      return r;
    }
    case Kind::Call: {
      auto a = fold(*n.a);
      if (!a) return std::nullopt;
      double b = 0.0;
      if (n.b) {
        auto bb = fold(*n.b);
        if (!bb) return std::nullopt;
        b = *bb;
      }
      double r = apply_func(n.func, *a, b);
      if (!std::isfinite(r)) return std::nullopt;
      return r;
    }
  }
  return std::nullopt;
}

// Emits postfix code; returns the stack depth needed by the subtree.
int emit(const Node& n, std::vector<Instr>& code) {
  if (n.kind != Kind::Var && collect_vars(n) == 0) {
    if (auto v = fold(n)) {
      code.push_back({Op::Const, 0, *v});
      return 1;
    }
  }
  switch (n.kind) {
    case Kind::Num:
    case Kind::Pi:
      code.push_back({Op::Const, 0, n.value});
      return 1;
    case Kind::Var:
      code.push_back({Op::Load, n.slot, 0.0});
      return 1;
    case Kind::Neg: {
      int d = emit(*n.a, code);
      code.push_back({Op::Neg, 0, 0.0});
      return d;
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      int da = emit(*n.a, code);
      int db = emit(*n.b, code);
      static constexpr Op kOps[] = {Op::Add, Op::Sub, Op::Mul, Op::Div};
      code.push_back(
          {kOps[static_cast<int>(n.kind) - static_cast<int>(Kind::Add)], 0,
           0.0});
      return std::max(da, db + 1);
    }
    case Kind::Call: {
      int da = emit(*n.a, code);
      int depth = da;
      if (n.b) depth = std::max(da, emit(*n.b, code) + 1);
      code.push_back({func_op(n.func), 0, 0.0});
      return depth;
    }
  }
  return 0;
}

double run(const std::vector<Instr>& code, const double* vars, double* st) {
  int sp = -1;
  for (const Instr& in : code) {
    switch (in.op) {
      case Op::Const: st[++sp] = in.value; break;
      case Op::Load: st[++sp] = vars[in.slot]; break;
      case Op::Neg: st[sp] = -st[sp]; break;
      case Op::Add: --sp; st[sp] += st[sp + 1]; break;
      case Op::Sub: --sp; st[sp] -= st[sp + 1]; break;
      case Op::Mul: --sp; st[sp] *= st[sp + 1]; break;
      case Op::Div:
        --sp;
        if (st[sp + 1] == 0.0) throw_div_zero();
        st[sp] /= st[sp + 1];
        break;
      case Op::Sin: st[sp] = std::sin(st[sp]); break;
      case Op::Cos: st[sp] = std::cos(st[sp]); break;
      case Op::Abs: st[sp] = std::abs(st[sp]); break;
      case Op::Exp: st[sp] = std::exp(st[sp]); break;
      case Op::Frac: st[sp] = frac(st[sp]); break;
      case Op::Tri: st[sp] = tri(st[sp]); break;
      case Op::Min: --sp; st[sp] = std::min(st[sp], st[sp + 1]); break;
      case Op::Max: --sp; st[sp] = std::max(st[sp], st[sp + 1]); break;
    }
  }
  return st[0];
}

}  // namespace

Expression::Expression() : Expression(make_num(0.0), "0") {}

Expression::Expression(NodePtr root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {
  compile();
}

void Expression::compile() {
  auto code = std::make_shared<std::vector<Instr>>();
  stack_depth_ = emit(*root_, *code);
  code_ = std::move(code);
  free_vars_ = collect_vars(*root_);
}

Expression Expression::constant(double value) {
  if (!std::isfinite(value)) throw EvalError("non-finite constant");
  NodePtr n = make_num(value);
  std::string s;
  print(*n, s);
  return Expression(n, s);
}

Expression Expression::variable(int slot) {
  if (slot < 0 || slot >= kNumVars) throw EvalError("bad variable slot");
  return Expression(make_var(slot), std::string(kVarNames[slot]));
}

double Expression::evaluate(const Bindings& b) const {
  std::uint32_t missing = free_vars_ & ~b.mask;
  if (missing) {
    for (int i = 0; i < kNumVars; ++i) {
      if ((missing >> i) & 1u) {
        throw EvalError("missing binding for variable '" +
                        std::string(kVarNames[i]) + "'");
      }
    }
  }
  for (int i = 0; i < kNumVars; ++i) {
    if (((free_vars_ >> i) & 1u) && !std::isfinite(b.values[i])) {
      throw EvalError("non-finite value bound to '" +
                      std::string(kVarNames[i]) + "'");
    }
  }
  return evaluate_unchecked(b.values.data());
}

double Expression::evaluate_unchecked(const double* values) const {
  double r;
  if (stack_depth_ <= 32) {
    double st[32];
    r = run(*code_, values, st);
  } else {
    std::vector<double> st(stack_depth_);
    r = run(*code_, values, st.data());
  }
  if (!std::isfinite(r)) throw EvalError("non-finite result in '" + source_ + "'");
  return r;
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

Expression Expression::substitute(int slot,
                                  const Expression& replacement) const {
  NodePtr n = substitute_node(root_, slot, replacement.root_);
  std::string s;
  print(*n, s);
  return Expression(n, s);
}

namespace {
std::string printed(const NodePtr& n) {
  std::string s;
  print(*n, s);
  return s;
}
}  // namespace

Expression operator-(const Expression& a) {
  NodePtr n = make_node(Kind::Neg, a.root_);
  return Expression(n, printed(n));
}

Expression operator+(const Expression& a, const Expression& b) {
  NodePtr n = make_node(Kind::Add, a.root_, b.root_);
  return Expression(n, printed(n));
}

Expression operator-(const Expression& a, const Expression& b) {
  NodePtr n = make_node(Kind::Sub, a.root_, b.root_);
  return Expression(n, printed(n));
}

Expression operator*(const Expression& a, const Expression& b) {
  NodePtr n = make_node(Kind::Mul, a.root_, b.root_);
  return Expression(n, printed(n));
}

Expression operator/(const Expression& a, const Expression& b) {
  NodePtr n = make_node(Kind::Div, a.root_, b.root_);
  return Expression(n, printed(n));
}

Expression parse(std::string_view source) {
  Parser p(source);
  NodePtr root = p.parse_all();
  return Expression(root, std::string(source));
}

PeriodicityReport check_periodicity(const Expression& e, int slot,
                                    std::size_t n_samples,
                                    const SampleBox& box,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PeriodicityReport rep;
  std::array<double, kNumVars> p{};
  for (std::size_t s = 0; s < n_samples; ++s) {
    for (int i = 0; i < kNumVars; ++i) {
      double x = unit(rng);
      p[i] = box.lo[i] + (box.hi[i] - box.lo[i]) * x;
    }
    if (!e.depends_on(slot)) p[slot] = 0.0;
    double a = e.evaluate_unchecked(p.data());
    p[slot] += 1.0;
    double b = e.evaluate_unchecked(p.data());
    rep.max_deviation = std::max(rep.max_deviation, std::abs(b - a));
    ++rep.samples;
  }
  return rep;
}

}  // namespace homoglab
