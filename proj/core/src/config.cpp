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

#include "homoglab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "homoglab/error.hpp"
#include "homoglab/highdim.hpp"

namespace homoglab {

namespace {

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(source_ + ": " + key + ": " + msg);
  }

  double number(const toml::node& n, const std::string& key) const {
    if (auto v = n.value<double>()) return *v;
    fail(key, "expected a number");
  }

  int integer(const toml::node& n, const std::string& key) const {
    if (auto v = n.value<int64_t>()) return static_cast<int>(*v);
    fail(key, "expected an integer");
  }

  std::string string(const toml::node& n, const std::string& key) const {
    if (auto v = n.value<std::string>()) return *v;
    fail(key, "expected a string");
  }

  const toml::array& array(const toml::node& n, const std::string& key) const {
    if (auto a = n.as_array()) return *a;
    fail(key, "expected an array");
  }

  std::vector<double> numbers(const toml::node& n, const std::string& key) const {
    std::vector<double> out;
    const auto& a = array(n, key);
    for (std::size_t i = 0; i < a.size(); ++i) {
      out.push_back(number(a[i], key + "[" + std::to_string(i) + "]"));
    }
    return out;
  }

  std::vector<double> pair(const toml::node& n, const std::string& key) const {
    auto v = numbers(n, key);
    if (v.size() != 2 || !(v[0] < v[1])) fail(key, "expected [lo, hi], lo < hi");
    return v;
  }

  Expression expression(const toml::node& n, const std::string& key) const {
    std::string text = string(n, key);
    try {
      return parse(text);
    } catch (const ParseError& e) {
      fail(key, std::string(e.what()) + " at offset " +
                    std::to_string(e.offset()) + " in '" + text + "'");
    }
  }

  ModeMap modes(const toml::node& n, const std::string& key, int dim) const {
    ModeMap out;
    const auto& a = array(n, key);
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::string k = key + "[" + std::to_string(i) + "]";
      auto row = numbers(a[i], k);
      if (static_cast<int>(row.size()) != dim + 2) {
        fail(k, "expected " + std::to_string(dim + 2) +
                    " entries [k1, ..., re, im]");
      }
      std::vector<int> idx;
      for (int d = 0; d < dim; ++d) {
        if (row[d] != std::floor(row[d])) fail(k, "mode index must be an integer");
        idx.push_back(static_cast<int>(row[d]));
      }
      out[idx] = {row[dim], row[dim + 1]};
    }
    ModeMap conj;
    for (const auto& [k, v] : out) {
      std::vector<int> mk;
      for (int x : k) mk.push_back(-x);
      if (!out.count(mk)) conj[mk] = std::conj(v);
    }
    out.merge(conj);
    return out;
  }

 private:
  std::string source_;
};

FieldSpec read_field(const Reader& r, const toml::table& t, bool& strict) {
  auto kind_node = t["kind"];
  if (!kind_node) r.fail("field.kind", "missing");
  FieldKind kind;
  try {
    kind = parse_field_kind(r.string(*kind_node.node(), "field.kind"));
  } catch (const ConfigError& e) {
    r.fail("field.kind", e.what());
  }
  int dim = 1;
  if (auto n = t["dimension"].node()) dim = r.integer(*n, "field.dimension");
  if (auto n = t["strict"].node()) {
    auto b = n->value<bool>();
    if (!b) r.fail("field.strict", "expected a boolean");
    strict = *b;
  }

  FieldSpec spec;
  if (kind == FieldKind::QuasiPeriodic) {
    auto qp = t["qp"].as_table();
    if (!qp) r.fail("field.qp", "missing table");
    auto freq_node = (*qp)["frequency"].node();
    auto modes_node = (*qp)["modes"].node();
    if (!freq_node) r.fail("field.qp.frequency", "missing");
    if (!modes_node) r.fail("field.qp.modes", "missing");
    auto freq = r.numbers(*freq_node, "field.qp.frequency");
    auto modes = r.modes(*modes_node, "field.qp.modes",
                         static_cast<int>(freq.size()));
    double sigma = 1.0;
    std::optional<double> c_xi;
    if (auto n = (*qp)["sigma"].node()) sigma = r.number(*n, "field.qp.sigma");
    if (auto n = (*qp)["c_xi"].node()) c_xi = r.number(*n, "field.qp.c_xi");
    spec = FieldSpec::quasi_periodic(
        QuasiPeriodicField(std::move(freq), std::move(modes), sigma, c_xi));
  } else {
    auto comp_node = t["components"].node();
    if (!comp_node) r.fail("field.components", "missing");
    const auto& a = r.array(*comp_node, "field.components");
    std::vector<Expression> comps;
    for (std::size_t i = 0; i < a.size(); ++i) {
      comps.push_back(
          r.expression(a[i], "field.components[" + std::to_string(i) + "]"));
    }
    if (static_cast<int>(comps.size()) != dim) {
      r.fail("field.components", "has " + std::to_string(comps.size()) +
                                     " entries but dimension is " +
                                     std::to_string(dim));
    }
    if (kind == FieldKind::MultiScale) {
      if (dim != 1) r.fail("field.dimension", "multi-scale fields are scalar");
      UTBox box;
      if (auto b = t["box"].as_table()) {
        if (auto n = (*b)["u"].node()) {
          auto p = r.pair(*n, "field.box.u");
          box.u_lo = p[0];
          box.u_hi = p[1];
        }
        if (auto n = (*b)["t"].node()) {
          auto p = r.pair(*n, "field.box.t");
          box.t_lo = p[0];
          box.t_hi = p[1];
        }
      }
      spec = FieldSpec::multi_scale(comps[0], box);
    } else {
      spec = FieldSpec::single_scale(std::move(comps));
    }
  }
  if (auto n = t["kappa"].node()) spec.declared_kappa = r.number(*n, "field.kappa");
  if (auto n = t["sup_norm"].node()) {
    spec.declared_sup = r.number(*n, "field.sup_norm");
  }
  if (auto n = t["name"].node()) spec.name = r.string(*n, "field.name");
  return spec;
}

}  // namespace

Config parse_config(std::string_view text, std::string_view source) {
  Config cfg;
  cfg.source = std::string(source);
  Reader r(cfg.source);
  toml::table root;
  try {
    root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    throw ConfigError(cfg.source + ":" +
                      std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }

  try {
    if (auto t = root["field"].as_table()) {
      cfg.field = read_field(r, *t, cfg.strict);
    }

    if (auto t = root["highdim"].as_table()) {
      HighdimSettings h;
      if (auto n = (*t)["pairs_per_axis"].node()) {
        h.pairs_per_axis = r.integer(*n, "highdim.pairs_per_axis");
        if (h.pairs_per_axis < 1) r.fail("highdim.pairs_per_axis", "must be >= 1");
      }
      if (auto n = (*t)["horizon"].node()) {
        h.horizon = r.number(*n, "highdim.horizon");
      }
      if (auto n = (*t)["frequency"].node()) {
        h.frequency = r.numbers(*n, "highdim.frequency");
      }
      if (auto n = (*t)["modes"].node()) {
        if (h.frequency.empty()) r.fail("highdim.modes", "needs highdim.frequency");
        h.modes = r.modes(*n, "highdim.modes",
                          static_cast<int>(h.frequency.size()));
      }
      if (!cfg.field && !h.modes.empty()) {
        cfg.field = shear_field(h.frequency, h.modes);
      }
      cfg.highdim = std::move(h);
    }

    if (auto t = root["coupled"].as_table()) {
      auto need = [&](const char* key) -> const toml::node& {
        auto n = (*t)[key].node();
        if (!n) r.fail(std::string("coupled.") + key, "missing");
        return *n;
      };
      auto a = r.numbers(need("a"), "coupled.a");
      const auto& f = r.array(need("f"), "coupled.f");
      std::vector<double> c = {0.0, 0.0};
      if (auto n = (*t)["c"].node()) c = r.numbers(*n, "coupled.c");
      if (a.size() != 2 || f.size() != 2 || c.size() != 2) {
        r.fail("coupled", "a, f and c must have two entries each");
      }
      cfg.coupled = CoupledSpec::make(a[0], a[1], r.expression(f[0], "coupled.f[0]"),
                                      r.expression(f[1], "coupled.f[1]"), c[0],
                                      c[1]);
    }

    if (auto t = root["transport"].as_table()) {
      TransportSettings ts;
      auto phi = (*t)["phi"].node();
      if (!phi) r.fail("transport.phi", "missing");
      ts.phi = r.expression(*phi, "transport.phi");
      if (auto n = (*t)["lip_phi"].node()) {
        ts.lip_phi = r.number(*n, "transport.lip_phi");
      }
      auto grid = (*t)["grid"].node();
      if (!grid) r.fail("transport.grid", "missing");
      const auto& axes = r.array(*grid, "transport.grid");
      for (std::size_t i = 0; i < axes.size(); ++i) {
        std::string k = "transport.grid[" + std::to_string(i) + "]";
        auto ax = axes[i].as_table();
        if (!ax) r.fail(k, "expected {min, max, points}");
        GridAxis g;
        auto lo = (*ax)["min"].node();
        auto hi = (*ax)["max"].node();
        auto pts = (*ax)["points"].node();
        if (!lo || !hi || !pts) r.fail(k, "expected {min, max, points}");
        g.min = r.number(*lo, k + ".min");
        g.max = r.number(*hi, k + ".max");
        g.points = r.integer(*pts, k + ".points");
        ts.grid.push_back(g);
      }
      if (auto n = (*t)["t"].node()) ts.t = r.number(*n, "transport.t");
      if (auto n = (*t)["epsilon"].node()) {
        ts.epsilon = r.numbers(*n, "transport.epsilon");
      }
      cfg.transport = std::move(ts);
    }

    if (auto t = root["run"].as_table()) {
      if (auto n = (*t)["eps"].node()) cfg.run.eps = r.numbers(*n, "run.eps");
      if (auto n = (*t)["horizon"].node()) {
        cfg.run.horizon = r.number(*n, "run.horizon");
      }
      if (auto n = (*t)["tol"].node()) cfg.run.tol = r.number(*n, "run.tol");
      if (auto n = (*t)["budget"].node()) {
        cfg.run.budget = r.number(*n, "run.budget");
      }
      if (auto n = (*t)["c"].node()) {
        if (n->is_array()) {
          cfg.run.c = r.numbers(*n, "run.c");
        } else {
          cfg.run.c = {r.number(*n, "run.c")};
        }
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(cfg.source + ": " + e.what());
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace homoglab
