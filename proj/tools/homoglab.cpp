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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/format.h>

#include "homoglab/catalog.hpp"
#include "homoglab/config.hpp"
#include "homoglab/coupled.hpp"
#include "homoglab/csv.hpp"
#include "homoglab/effective.hpp"
#include "homoglab/error.hpp"
#include "homoglab/harness.hpp"
#include "homoglab/highdim.hpp"
#include "homoglab/parallel.hpp"
#include "homoglab/quasiperiodic.hpp"
#include "homoglab/transport.hpp"
#include "selftest.hpp"

using namespace homoglab;

namespace {

constexpr int kBoundFailed = 1;
constexpr int kUsageError = 2;

// Options shared by the run subcommands; unset values fall back to the
// config's [run] table and then to per-command defaults.
struct RunFlags {
  std::vector<double> eps;
  std::optional<double> horizon;
  std::optional<double> tol;
  std::optional<double> budget;
  std::optional<double> c;
  std::string out;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool with_c = false) {
  app->add_option("--eps", f.eps, "Epsilon values, descending")->expected(1, -1);
  app->add_option("--horizon", f.horizon, "Time horizon T");
  app->add_option("--tol", f.tol, "Tolerance for effective constants");
  app->add_option("--budget", f.budget,
                  "Integration error budget (default 1e-3 * min eps)");
  if (with_c) app->add_option("--c", f.c, "Initial value");
  app->add_option("--out", f.out, "Write the CSV table to this file");
}

struct Resolved {
  FieldSpec field;
  std::optional<Config> cfg;
  std::string name;
};

Resolved resolve(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    Config cfg = load_config(arg);
    if (!cfg.field) throw ConfigError(arg + ": no [field] or [highdim] field");
    ValidationOptions vo;
    vo.strict_bounded = cfg.strict;
    cfg.field->validate(vo);
    FieldSpec f = *cfg.field;
    return {f, std::move(cfg), arg};
  }
  Scenario s = catalog(arg);
  return {s.field, std::nullopt, s.name};
}

Config require_config(const std::string& arg) {
  if (!std::filesystem::exists(arg)) {
    throw ConfigError("config file not found: " + arg);
  }
  return load_config(arg);
}

std::vector<double> pick_eps(const RunFlags& f, const std::optional<Config>& cfg,
                             std::vector<double> fallback) {
  if (!f.eps.empty()) return f.eps;
  if (cfg && !cfg->run.eps.empty()) return cfg->run.eps;
  return fallback;
}

double pick(const std::optional<double>& flag,
            const std::optional<Config>& cfg,
            std::optional<double> RunSettings::*member, double fallback) {
  if (flag) return *flag;
  if (cfg && (cfg->run.*member)) return *(cfg->run.*member);
  return fallback;
}

double pick_budget(const RunFlags& f, const std::optional<Config>& cfg,
                   const std::vector<double>& eps) {
  double b = pick(f.budget, cfg, &RunSettings::budget, 0.0);
  if (b > 0.0) return b;
  return 1e-3 * *std::min_element(eps.begin(), eps.end());
}

void check_eps(const std::vector<double>& eps) {
  if (eps.empty()) throw DomainError("empty eps list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || eps[i] > 1.0 || (i && !(eps[i] < eps[i - 1]))) {
      throw DomainError("eps values must be descending and in (0, 1]");
    }
  }
}

void emit(const CsvTable& table, const std::string& out) {
  if (out.empty()) {
    fmt::print("{}", table.str());
  } else {
    table.save(out);
    fmt::print("wrote {}\n", out);
  }
}

const char* verdict(bool ok) { return ok ? "ok" : "VIOLATED"; }

// effective --------------------------------------------------------------

int cmd_effective(const std::string& arg, double tol, double u, double t,
                  const std::string& out) {
  Resolved r = resolve(arg);
  EffectiveConstant e;
  switch (r.field.kind()) {
    case FieldKind::QuasiPeriodic:
      e = effective_speed(*r.field.qp(), tol);
      break;
    case FieldKind::MultiScale:
      e = effective_field(r.field, u, t, tol);
      break;
    case FieldKind::SingleScale:
      if (r.field.dimension() == 1) {
        e = effective_constant(r.field, tol);
      } else {
        BoundedMotionReport c0 = estimate_c0(r.field, 100.0, 4, 1e-8);
        fmt::print("sampled C0 {} over {} pairs\n", format_number(c0.C0_hat),
                   c0.pair_grid);
        e = rotation_vector(r.field, c0.C0_hat, tol, false);
      }
      break;
  }
  fmt::print("{}: method {}, K {}, {}\n", r.name, to_string(e.method), e.K,
             e.rigorous ? "rigorous bar" : "estimated bar");
  CsvTable table({"component", "value", "error_bar"});
  for (std::size_t i = 0; i < e.value.size(); ++i) {
    table.add_row({std::to_string(i + 1), format_number(e.value[i]),
                   format_number(e.error_bar[i])});
  }
  emit(table, out);
  return 0;
}

// sweep ------------------------------------------------------------------

int cmd_sweep(const std::string& scenario, const RunFlags& f) {
  auto eps = pick_eps(f, std::nullopt, {1e-1, 1e-2, 1e-3});
  double T = f.horizon.value_or(10.0);
  SweepTable t = sweep(scenario, eps, T, f.budget.value_or(0.0));
  if (!t.valid) {
    fmt::print("{}: invalid sweep: {}\n", scenario, t.note);
    return kBoundFailed;
  }
  emit(t.csv(), f.out);
  bool ok = t.max_ratio() <= kSafetyFactor;
  fmt::print("{}: slope {:.4f}, r2 {:.5f}, max ratio {:.4f}: bound {}{}\n",
             scenario, t.fit.slope, t.fit.r2, t.max_ratio(), verdict(ok),
             t.note.empty() ? "" : " (" + t.note + ")");
  return ok ? 0 : kBoundFailed;
}

// multiscale -------------------------------------------------------------

int cmd_multiscale(const std::string& arg, const RunFlags& f) {
  Resolved r = resolve(arg);
  auto eps = pick_eps(f, r.cfg, {1e-1, 3e-2, 1e-2});
  check_eps(eps);
  double T = pick(f.horizon, r.cfg, &RunSettings::horizon, 3.0);
  double tol = pick(f.tol, r.cfg, &RunSettings::tol, 1e-8);
  double c = 1.5;
  if (f.c) {
    c = *f.c;
  } else if (r.cfg && !r.cfg->run.c.empty()) {
    c = r.cfg->run.c[0];
  }
  double budget = pick_budget(f, r.cfg, eps);
  MultiscaleReport rep = verify_multiscale(r.field, c, T, eps, tol, budget);
  CsvTable table({"epsilon", "cutoff", "long_normalized", "short_normalized",
                  "constant", "short_excess", "short_excess_min"});
  bool short_ok = true;
  for (const auto& row : rep.rows) {
    table.add_row({format_number(row.eps), format_number(row.cutoff),
                   format_number(row.long_normalized),
                   format_number(row.short_normalized),
                   format_number(row.constant), format_number(row.short_excess),
                   format_number(row.short_excess_min)});
    short_ok = short_ok && row.short_excess_min <= 0.0;
  }
  emit(table, f.out);
  bool long_ok = rep.long_stability <= 2.0;
  bool const_ok = rep.constant_stability <= 2.0;
  fmt::print("|f| {}, kappa {}, C_emp {}, f-bar evaluations {}\n",
             format_number(rep.sup_norm), format_number(rep.kappa),
             format_number(rep.C_emp), rep.fbar_evaluations);
  fmt::print("long-time stability {:.3f}: {}; C_emp stability {:.3f}: {}; "
             "short-time bound: {}\n",
             rep.long_stability, verdict(long_ok), rep.constant_stability,
             verdict(const_ok), verdict(short_ok));
  return long_ok && const_ok && short_ok ? 0 : kBoundFailed;
}

// qp ---------------------------------------------------------------------

int cmd_qp(const std::string& arg, const RunFlags& f) {
  Resolved r = resolve(arg);
  if (r.field.kind() != FieldKind::QuasiPeriodic) {
    throw DomainError("qp needs a quasi-periodic field");
  }
  const QuasiPeriodicField& F = *r.field.qp();
  auto eps = pick_eps(f, r.cfg, {1e-1, 3e-2, 1e-2});
  check_eps(eps);
  double T = pick(f.horizon, r.cfg, &RunSettings::horizon, 10.0);
  double budget = pick_budget(f, r.cfg, eps);
  double c = f.c.value_or(0.0);

  DiophantineReport dio = check_diophantine(F.frequency(), F.sigma(), 20, F.c_xi());
  fmt::print("Diophantine scan |k| <= 20: worst ratio {} at k = ({}): {}\n",
             format_number(dio.worst_ratio), fmt::join(dio.worst_k, ", "),
             verdict(dio.passes));
  fmt::print("H^1 norm {}\n", format_number(hs_norm(F, 1.0)));

  QpRateTable a = verify_qp_rate(F, eps, c, T, budget);
  QpRateTable b = verify_qp_rate(F, eps, c, 2.0 * T, budget);
  CsvTable table({"epsilon", "horizon", "sup_error", "ratio", "sup_error_mean"});
  double lo = INFINITY, hi = 0.0, hi2 = 0.0;
  for (const auto* tab : {&a, &b}) {
    for (const auto& row : tab->rows) {
      table.add_row({format_number(row.eps), format_number(row.horizon),
                     format_number(row.sup_error), format_number(row.ratio),
                     format_number(row.sup_error_mean)});
    }
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    lo = std::min(lo, a.rows[i].ratio);
    hi = std::max(hi, a.rows[i].ratio);
    hi2 = std::max(hi2, b.rows[i].ratio);
  }
  emit(table, f.out);
  bool spread_ok = lo > 0.0 && hi / lo <= 2.0;
  bool uniform_ok = hi > 0.0 && std::abs(hi2 / hi - 1.0) <= 0.1;
  fmt::print("mean {}, drift (harmonic mean) {}\n", format_number(a.mean),
             format_number(a.speed));
  fmt::print("ratio spread {:.3f}: {}; horizon doubling {:.4f}: {}\n", hi / lo,
             verdict(spread_ok), hi2 / hi, verdict(uniform_ok));
  return spread_ok && uniform_ok && dio.passes ? 0 : kBoundFailed;
}

// shear ------------------------------------------------------------------

struct ShearInput {
  std::vector<double> xi;
  ModeMap G;
  int pairs = 4;
  double c0_horizon = 100.0;
};

ShearInput shear_input(const std::string& arg, std::optional<Config>& cfg) {
  ShearInput in;
  if (std::filesystem::exists(arg)) {
    cfg = load_config(arg);
    if (!cfg->highdim || cfg->highdim->modes.empty()) {
      throw ConfigError(arg + ": [highdim] needs frequency and modes");
    }
    in.xi = cfg->highdim->frequency;
    in.G = cfg->highdim->modes;
    in.pairs = cfg->highdim->pairs_per_axis;
    in.c0_horizon = cfg->highdim->horizon;
  } else if (arg == "shear-golden") {
    in.xi = golden_frequency();
    in.G = golden_shear_profile();
  } else {
    throw ConfigError("shear needs a config file or 'shear-golden'");
  }
  return in;
}

int cmd_shear(const std::string& arg, const RunFlags& f) {
  std::optional<Config> cfg;
  ShearInput in = shear_input(arg, cfg);
  FieldSpec field = shear_field(in.xi, in.G);
  Conjugation conj = conjugation_theta(in.G, in.xi);
  auto eps = pick_eps(f, cfg, {1e-1, 1e-2, 1e-3});
  check_eps(eps);
  double T = pick(f.horizon, cfg, &RunSettings::horizon, 10.0);
  double tol = pick(f.tol, cfg, &RunSettings::tol, 1e-4);
  double budget = pick_budget(f, cfg, eps);
  const double C0 = conj.c0_bound();
  std::size_t n = in.xi.size();

  EffectiveConstant rho = rotation_vector(field, C0, tol, true);
  bool rho_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    double exact = in.xi[i] / conj.mean_G;
    bool ok = std::abs(rho.value[i] - exact) <= rho.error_bar[i];
    rho_ok = rho_ok && ok;
    fmt::print("rotation {}: {} (exact {}, bar {}): {}\n", i + 1,
               format_number(rho.value[i]), format_number(exact),
               format_number(rho.error_bar[i]), verdict(ok));
  }

  const double res_budget = 1e-8;
  std::vector<double> c0(n);
  for (std::size_t i = 0; i < n; ++i) c0[i] = 0.3 + 0.4 * i / std::max<std::size_t>(1, n - 1);
  double res = linear_flow_residual(conj, field, c0, 100.0, res_budget);
  bool res_ok = res <= 5.0 * res_budget;
  fmt::print("theta sup bound {}, C0 bound {}, conjugation residual {}: {}\n",
             format_number(conj.sup_bound), format_number(C0),
             format_number(res), verdict(res_ok));

  BoundedMotionReport sampled =
      estimate_c0(field, in.c0_horizon, in.pairs, res_budget);
  bool c0_ok = sampled.C0_hat <= C0 + 4.0 * res_budget;
  fmt::print("sampled C0 {} over {} pairs: {}\n", format_number(sampled.C0_hat),
             sampled.pair_grid, verdict(c0_ok));

  std::vector<double> drift(n), start(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) drift[i] = in.xi[i] / conj.mean_G;
  CsvTable table({"epsilon", "horizon", "sup_error", "theory_bound", "ratio"});
  bool hom_ok = true;
  for (double e : eps) {
    double err = drift_error(field, e, start, drift, T, budget);
    double bound = (1.0 + C0) * e;
    hom_ok = hom_ok && err <= kSafetyFactor * bound;
    table.add_row({format_number(e), format_number(T), format_number(err),
                   format_number(bound), format_number(err / bound)});
  }
  emit(table, f.out);
  fmt::print("homogenization bound: {}\n", verdict(hom_ok));
  return rho_ok && res_ok && c0_ok && hom_ok ? 0 : kBoundFailed;
}

// coupled ----------------------------------------------------------------

int cmd_coupled(const std::string& arg, const RunFlags& f) {
  std::optional<Config> cfg = require_config(arg);
  if (!cfg->coupled) throw ConfigError(arg + ": no [coupled] section");
  const CoupledSpec& spec = *cfg->coupled;
  auto eps = pick_eps(f, cfg, {1e-1, 1e-2, 1e-3});
  check_eps(eps);
  double T = pick(f.horizon, cfg, &RunSettings::horizon, 10.0);
  double budget = pick_budget(f, cfg, eps);
  double k1 = coupled_bound_constant(spec, 1);
  double k2 = coupled_bound_constant(spec, 2);
  CsvTable table({"epsilon", "horizon", "sup_error_1", "bound_1", "sup_error_2",
                  "bound_2"});
  bool ok = true;
  for (double e : eps) {
    CoupledSolution sol = solve_coupled(spec, e, T, budget);
    double e1 = 0.0, e2 = 0.0;
    for (std::size_t k = 0; k < sol.u1.size(); ++k) {
      double t = sol.u1.time(k);
      e1 = std::max(e1, std::abs(sol.u1.state(k)[0] - explicit_limit(spec, e, t, 1)));
      e2 = std::max(e2, std::abs(sol.u2.state(k)[0] - explicit_limit(spec, e, t, 2)));
    }
    ok = ok && e1 <= kSafetyFactor * k1 * e && e2 <= kSafetyFactor * k2 * e;
    table.add_row({format_number(e), format_number(T), format_number(e1),
                   format_number(k1 * e), format_number(e2),
                   format_number(k2 * e)});
  }
  emit(table, f.out);
  fmt::print("averages ({}, {}), bound constants ({}, {}): {}\n",
             format_number(spec.fbar1), format_number(spec.fbar2),
             format_number(k1), format_number(k2), verdict(ok));
  return ok ? 0 : kBoundFailed;
}

// transport --------------------------------------------------------------

int cmd_transport(const std::string& arg, const RunFlags& f) {
  std::optional<Config> cfg = require_config(arg);
  if (!cfg->transport) throw ConfigError(arg + ": no [transport] section");
  if (!cfg->field) throw ConfigError(arg + ": no field for the transport");
  const TransportSettings& ts = *cfg->transport;
  TransportProblem p;
  p.field = *cfg->field;
  p.field.validate();
  p.phi = ts.phi;
  p.lip_phi = ts.lip_phi;
  p.grid = ts.grid;
  p.t = f.horizon.value_or(ts.t);
  std::vector<double> eps = !f.eps.empty()      ? f.eps
                            : !ts.epsilon.empty() ? ts.epsilon
                                                  : pick_eps(f, cfg, {1e-1, 1e-2, 1e-3});
  check_eps(eps);
  double tol = pick(f.tol, cfg, &RunSettings::tol, 1e-8);
  double budget = pick_budget(f, cfg, eps);
  const int n = p.field.dimension();

  std::vector<double> drift;
  double drift_bar = 0.0;
  double constant = 1.0;
  if (cfg->highdim && !cfg->highdim->modes.empty()) {
    Conjugation conj = conjugation_theta(cfg->highdim->modes, cfg->highdim->frequency);
    for (double x : conj.xi) drift.push_back(x / conj.mean_G);
    constant = 1.0 + conj.c0_bound();
  } else {
    double C0 = 0.0;
    if (n >= 2) {
      C0 = estimate_c0(reversed_field(p.field), 100.0, 4, 1e-8).C0_hat;
      constant = 1.0 + C0;
    } else if (!p.field.autonomous()) {
      constant = 1.0 + 2.0 * estimate_sup_norm(p.field, 64).max();
    }
    EffectiveConstant d = transport_drift(p.field, tol, C0, false);
    drift = d.value;
    for (double b : d.error_bar) drift_bar = std::max(drift_bar, b);
  }

  std::vector<std::string> header = {"epsilon"};
  for (int i = 1; i <= n; ++i) header.push_back("x" + std::to_string(i));
  for (const char* h : {"value", "homogenized", "abs_diff"}) header.push_back(h);
  CsvTable table(header);
  bool ok = true;
  for (double e : eps) {
    p.eps = e;
    p.validate();
    double worst = 0.0;
    for (const auto& v : solve_transport(p, budget)) {
      double hom = homogenized_transport(p.phi, drift, v.x, p.t);
      double diff = std::abs(v.value - hom);
      worst = std::max(worst, diff);
      std::vector<std::string> row = {format_number(e)};
      for (double x : v.x) row.push_back(format_number(x));
      row.push_back(format_number(v.value));
      row.push_back(format_number(hom));
      row.push_back(format_number(diff));
      table.add_row(row);
    }
    double bound = p.lip_phi * (constant * e + p.t * drift_bar);
    bool row_ok = worst <= kSafetyFactor * bound;
    ok = ok && row_ok;
    fmt::print("eps {}: max |V - homogenized| {} (bound {}): {}\n",
               format_number(e), format_number(worst), format_number(bound),
               verdict(row_ok));
  }
  emit(table, f.out);
  return ok ? 0 : kBoundFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"homoglab: numerical checks of quantitative homogenization "
               "for oscillatory first-order ODEs.\n\n"
               "Expressions use + - * / ( ), pi, the variables r r1..r8 tau "
               "u u1..u8 t and the functions sin cos abs exp frac min max "
               "and tri(x) = |frac(x) - 1/2|."};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  std::string target;
  double tol = 1e-6, u = 0.0, t = 0.0;
  std::string out;
  auto* eff = app.add_subcommand("effective", "Effective constant of a field");
  eff->add_option("target", target, "Config file or catalog name")->required();
  eff->add_option("--tol", tol, "Target error bar");
  eff->add_option("--u", u, "Frozen u for multi-scale fields");
  eff->add_option("--t", t, "Frozen t for multi-scale fields");
  eff->add_option("--out", out, "Write the CSV table to this file");

  RunFlags sweep_flags, ms_flags, qp_flags, shear_flags, coupled_flags,
      transport_flags;
  auto* sw = app.add_subcommand("sweep", "Epsilon sweep of a catalog scenario");
  sw->add_option("scenario", target, "One of: " + [] {
    std::string s;
    for (const auto& n : sweep_scenarios()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->required();
  add_run_flags(sw, sweep_flags);

  auto* ms = app.add_subcommand("multiscale", "Two-regime multi-scale check");
  ms->add_option("config", target, "Config file or catalog name")->required();
  add_run_flags(ms, ms_flags, true);

  auto* qp = app.add_subcommand("qp", "Quasi-periodic rate check");
  qp->add_option("config", target, "Config file or catalog name")->required();
  add_run_flags(qp, qp_flags, true);

  auto* sh = app.add_subcommand("shear", "Shear flow on the torus");
  sh->add_option("config", target, "Config file or 'shear-golden'")->required();
  add_run_flags(sh, shear_flags);

  auto* co = app.add_subcommand("coupled", "Fast-switching coupled system");
  co->add_option("config", target, "Config file")->required();
  add_run_flags(co, coupled_flags);

  auto* tr = app.add_subcommand("transport", "Oscillatory transport equation");
  tr->add_option("config", target, "Config file")->required();
  add_run_flags(tr, transport_flags);

  std::uint64_t seed = 7;
  std::string out_dir = ".";
  auto* st = app.add_subcommand("selftest", "Seeded property suite");
  st->add_option("--seed", seed, "Seed for all sampled draws");
  st->add_option("--out-dir", out_dir, "Directory for the CSV outputs");

  CLI11_PARSE(app, argc, argv);
  parallel_threads() = threads;

  try {
    if (*eff) return cmd_effective(target, tol, u, t, out);
    if (*sw) return cmd_sweep(target, sweep_flags);
    if (*ms) return cmd_multiscale(target, ms_flags);
    if (*qp) return cmd_qp(target, qp_flags);
    if (*sh) return cmd_shear(target, shear_flags);
    if (*co) return cmd_coupled(target, coupled_flags);
    if (*tr) return cmd_transport(target, transport_flags);
    if (*st) {
      int failed = cli::run_selftest(seed, out_dir);
      return failed == 0 ? 0 : kBoundFailed;
    }
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kUsageError;
  }
  return kUsageError;
}
