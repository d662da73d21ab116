// Copyright 2026 The enaqt-fcn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end. Commands read a JSON config and write CSV or JSON
// to --out (or stdout).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enaqt/closed_form.hpp"
#include "enaqt/full_lindblad.hpp"
#include "enaqt/optimize.hpp"
#include "enaqt/reduced_dynamics.hpp"
#include "enaqt/validation.hpp"

namespace enaqt::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kBadConfig = 2, kSolverError = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string command;
  std::string config_path;
  std::string out_path;
  std::optional<std::string> solver;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

/// Parsed config. Command sections are kept as JSON and read by the command.
struct RunConfig {
  NetworkParams params;
  InitialCondition initial = SymmetricSuperposition{1};
  optimize::Solver solver = optimize::Solver::closed_form;
  std::optional<std::uint64_t> seed;
  bool has_network = false;
  json sweep = json::object(), optimize = json::object(), trajectory = json::object(), validate = json::object();
};

// ---- config parsing -------------------------------------------------------

namespace detail {

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

inline double number(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return obj[key].get<double>();
}

inline int integer(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
  return obj[key].get<int>();
}

inline bool boolean(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) throw ConfigError(std::string("'") + key + "' must be true or false");
  return obj[key].get<bool>();
}

inline std::string text(const json& obj, const char* key, std::string fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
  return obj[key].get<std::string>();
}

inline Eigen::MatrixXd real_matrix(const json& rows, int n, const char* what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw ConfigError(std::string("density_matrix.") + what + " must have N rows");
  Eigen::MatrixXd m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n)
      throw ConfigError(std::string("density_matrix.") + what + " must have N columns");
    for (int c = 0; c < n; ++c) {
      if (!rows[r][c].is_number()) throw ConfigError(std::string("density_matrix.") + what + " must be numeric");
      m(r, c) = rows[r][c].get<double>();
    }
  }
  return m;
}

inline optimize::Solver solver_named(const std::string& name) {
  auto s = optimize::parse_solver(name);
  if (!s) throw ConfigError("unknown solver '" + name + "'");
  return *s;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
  detail::reject_unknown(j,
                         {"N", "J", "eps_n", "delta", "kappa", "gamma", "lambda", "s", "density_matrix",
                          "solver", "seed", "sweep", "optimize", "trajectory", "validate"},
                         "config");
  RunConfig c;
  c.has_network = j.contains("N");
  NetworkParams& p = c.params;
  p.n_sites = detail::integer(j, "N", 2);
  p.coupling = detail::number(j, "J", 1.0);
  p.trap_rate = detail::number(j, "kappa", 0.0);
  p.decay_rate = detail::number(j, "gamma", 0.0);
  p.dephasing_rate = detail::number(j, "lambda", 0.0);
  if (j.contains("eps_n") && j.contains("delta")) throw ConfigError("give either 'eps_n' or 'delta', not both");
  p.trap_energy = detail::number(j, "eps_n", 0.0);
  if (j.contains("delta")) p = with_detuning(p, detail::number(j, "delta", 0.0));

  if (j.contains("s") && j.contains("density_matrix")) throw ConfigError("give either 's' or 'density_matrix'");
  if (j.contains("density_matrix")) {
    const json& dm = j["density_matrix"];
    detail::reject_unknown(dm, {"re", "im"}, "density_matrix");
    if (!dm.contains("re")) throw ConfigError("density_matrix needs 're'");
    if (p.n_sites < 1) throw ConfigError("'N' must be positive");
    DensityMatrix rho = detail::real_matrix(dm["re"], p.n_sites, "re").cast<std::complex<double>>();
    if (dm.contains("im"))
      rho += std::complex<double>(0.0, 1.0) * detail::real_matrix(dm["im"], p.n_sites, "im").cast<std::complex<double>>();
    c.initial = rho;
  } else {
    c.initial = SymmetricSuperposition{detail::integer(j, "s", 1)};
  }
  c.solver = detail::solver_named(detail::text(j, "solver", "closed_form"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  for (const char* section : {"sweep", "optimize", "trajectory", "validate"})
    if (j.contains(section) && !j[section].is_object())
      throw ConfigError(std::string("'") + section + "' must be a JSON object");
  c.sweep = j.value("sweep", json::object());
  c.optimize = j.value("optimize", json::object());
  c.trajectory = j.value("trajectory", json::object());
  c.validate = j.value("validate", json::object());
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

/// Violations of the network and initial state, optionally tolerating
/// kappa = Gamma = 0 (sweeps report such cells as missing).
inline void require_valid(const NetworkParams& p, const InitialCondition& init, bool allow_no_absorption = false) {
  if (p.n_sites < 2) throw ConfigError("'N' must satisfy N >= 2");
  auto v = validate(p, init);
  if (allow_no_absorption)
    std::erase_if(v, [](const std::string& m) { return m.rfind("no absorption", 0) == 0; });
  if (!v.empty()) throw ConfigError(join_violations(v));
}

// ---- formatting -----------------------------------------------------------

/// Twelve significant digits; missing values print as `nan`.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

inline std::string csv_line(const std::vector<double>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_number(values[i]);
  }
  s += '\n';
  return s;
}

inline json nullable(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

template <typename F>
json try_value(F&& f) {
  try {
    return nullable(f());
  } catch (const Error&) {
    return nullptr;
  }
}

// ---- commands -------------------------------------------------------------

inline std::string cmd_sweep(const RunConfig& c, int threads) {
  if (!c.has_network) throw ConfigError("sweep needs 'N'");
  detail::reject_unknown(c.sweep, {"axes", "objective"}, "sweep");
  optimize::SweepSpec spec;
  spec.base = c.params;
  spec.initial = c.initial;
  spec.solver = c.solver;
  if (auto o = optimize::parse_objective(detail::text(c.sweep, "objective", "efficiency"))) spec.objective = *o;
  else throw ConfigError("unknown objective");
  if (!c.sweep.contains("axes") || !c.sweep["axes"].is_array()) throw ConfigError("sweep needs an 'axes' array");
  for (const json& a : c.sweep["axes"]) {
    detail::reject_unknown(a, {"name", "min", "max", "count", "spacing"}, "sweep axis");
    optimize::Axis axis;
    axis.name = detail::text(a, "name", "");
    if (!a.contains("min") || !a.contains("max") || !a.contains("count"))
      throw ConfigError("sweep axis needs 'min', 'max' and 'count'");
    axis.min = detail::number(a, "min", 0.0);
    axis.max = detail::number(a, "max", 0.0);
    axis.count = detail::integer(a, "count", 0);
    const std::string spacing = detail::text(a, "spacing", "linear");
    if (spacing == "log") axis.spacing = optimize::Spacing::log;
    else if (spacing != "linear") throw ConfigError("axis spacing must be 'linear' or 'log'");
    spec.axes.push_back(axis);
  }
  if (auto v = optimize::validate_sweep(spec); !v.empty()) throw ConfigError(join_violations(v));
  if (spec.solver == optimize::Solver::closed_form && !std::holds_alternative<SymmetricSuperposition>(spec.initial))
    throw ConfigError("closed_form solver needs 's', not a density matrix");
  // Both ends of every axis must describe a valid network.
  for (bool upper : {false, true}) {
    NetworkParams p = spec.base;
    for (const auto& a : spec.axes) optimize::apply_axis(p, a.name, upper ? a.max : a.min);
    require_valid(p, spec.initial, true);
  }

  const auto rows = optimize::sweep(spec, threads);
  std::string out;
  for (const auto& a : spec.axes) out += a.name + ',';
  out += "eta,tau,rate\n";
  for (const auto& r : rows) {
    std::vector<double> v = r.coords;
    v.push_back(r.missing ? std::nan("") : r.eta);
    v.push_back(r.missing ? std::nan("") : r.tau);
    v.push_back(r.missing ? std::nan("") : r.rate);
    out += csv_line(v);
  }
  return out;
}

inline json optimum_json(const optimize::OptimumReport& r) {
  json j;
  j["argmax"] = {{"lambda", r.lambda}, {"kappa", r.kappa}};
  j["value"] = r.value;
  j["boundary_flag"] = r.boundary_flag;
  j["converged"] = r.converged;
  j["best_grid_value"] = nullable(r.best_grid_value);
  j["runs"] = r.runs;
  if (r.analytic) {
    const auto& a = *r.analytic;
    j["analytic"] = {{"kappa_opt", a.enaqt.kappa_opt},
                     {"lambda_opt", a.enaqt.lambda_opt},
                     {"rate_opt", a.enaqt.rate_opt},
                     {"c_ratio", a.enaqt.c_ratio},
                     {"kappa_rel_delta", a.kappa_rel_delta},
                     {"lambda_rel_delta", a.lambda_rel_delta},
                     {"rate_rel_delta", nullable(a.rate_rel_delta)},
                     {"coherent_eta_max", nullable(a.coherent_eta_max)}};
  } else {
    j["analytic"] = nullptr;
  }
  return j;
}

inline std::string cmd_optimize(const RunConfig& c, int threads) {
  if (!c.has_network) throw ConfigError("optimize needs 'N'");
  detail::reject_unknown(c.optimize,
                         {"objective", "lambda_bound", "kappa_bound", "grid", "x_tol", "max_iterations", "verify"},
                         "optimize");
  optimize::MaximizeOptions opt;
  if (auto o = optimize::parse_objective(detail::text(c.optimize, "objective", "efficiency"))) opt.objective = *o;
  else throw ConfigError("unknown objective");
  opt.solver = c.solver;
  opt.lambda_bound = detail::number(c.optimize, "lambda_bound", opt.lambda_bound);
  opt.kappa_bound = detail::number(c.optimize, "kappa_bound", opt.kappa_bound);
  opt.grid = detail::integer(c.optimize, "grid", opt.grid);
  opt.nelder_mead.x_tol = detail::number(c.optimize, "x_tol", opt.nelder_mead.x_tol);
  opt.nelder_mead.max_iterations = detail::integer(c.optimize, "max_iterations", opt.nelder_mead.max_iterations);
  opt.threads = threads;
  if (!(opt.lambda_bound > 0.0) || !(opt.kappa_bound > 0.0)) throw ConfigError("search bounds must be > 0");
  if (opt.grid < 1) throw ConfigError("'grid' must be >= 1");
  if (!(opt.nelder_mead.x_tol > 0.0) || opt.nelder_mead.max_iterations < 1)
    throw ConfigError("'x_tol' and 'max_iterations' must be positive");
  if (opt.solver == optimize::Solver::closed_form && !std::holds_alternative<SymmetricSuperposition>(c.initial))
    throw ConfigError("closed_form solver needs 's', not a density matrix");
  NetworkParams probe = c.params;
  probe.trap_rate = opt.kappa_bound;
  probe.dephasing_rate = opt.lambda_bound;
  require_valid(probe, c.initial);

  json report;
  report["objective"] = std::string(optimize::to_string(opt.objective));
  report["solver"] = std::string(optimize::to_string(opt.solver));
  report["domain"] = {{"lambda", {0.0, opt.lambda_bound}}, {"kappa", {0.0, opt.kappa_bound}}};
  report["optimum"] = optimum_json(optimize::maximize(c.params, c.initial, opt));
  if (detail::boolean(c.optimize, "verify", false)) {
    const auto v = optimize::verify_optimum(c.params.n_sites, c.params.coupling, detuning(c.params), opt);
    report["verify"] = {{"numeric", optimum_json(v.numeric)},
                        {"kappa_opt", v.analytic.kappa_opt},
                        {"lambda_opt", v.analytic.lambda_opt},
                        {"rate_opt", v.analytic.rate_opt},
                        {"kappa_rel_delta", v.kappa_rel_delta},
                        {"lambda_rel_delta", v.lambda_rel_delta},
                        {"rate_rel_delta", v.rate_rel_delta},
                        {"residuals_numeric", {v.residuals_numeric.first, v.residuals_numeric.second}},
                        {"residuals_analytic", {v.residuals_analytic.first, v.residuals_analytic.second}}};
  }
  return report.dump(2) + "\n";
}

inline std::string cmd_trajectory(const RunConfig& c) {
  if (!c.has_network) throw ConfigError("trajectory needs 'N'");
  detail::reject_unknown(c.trajectory, {"t_max", "points", "full", "max_sites"}, "trajectory");
  const double t_max = detail::number(c.trajectory, "t_max", 10.0);
  const int points = detail::integer(c.trajectory, "points", 101);
  const bool with_full = detail::boolean(c.trajectory, "full", false);
  const int max_sites = detail::integer(c.trajectory, "max_sites", full::kDefaultMaxSites);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("'t_max' must be finite and > 0");
  if (points < 2) throw ConfigError("'points' must be >= 2");
  require_valid(c.params, c.initial, true);

  std::vector<double> times(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) times[i] = t_max * i / (points - 1);
  const ReducedVector v0 = reduced_initial_vector(c.initial, c.params.n_sites);
  const auto states = reduced::trajectory(c.params, v0, times);
  std::vector<DensityMatrix> rhos;
  if (with_full) {
    const DensityMatrix rho0 = std::holds_alternative<DensityMatrix>(c.initial)
                                   ? std::get<DensityMatrix>(c.initial)
                                   : superposition_density(c.params.n_sites,
                                                           std::get<SymmetricSuperposition>(c.initial).s);
    rhos = full::evolve(c.params, rho0, times, max_sites);
  }

  std::string out = "t,rho_nn,x,y,sigma,trace,eta_accumulated,decay_accumulated";
  out += with_full ? ",rho_nn_full\n" : "\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ReducedVector& v = states[i];
    const auto acc = reduced::accumulate(c.params, v0, times[i]);
    std::vector<double> row{times[i], v.rho_nn, v.x, v.y, v.sigma, v.t, acc.trapped, acc.decayed};
    if (with_full) row.push_back(rhos[i](c.params.n_sites - 1, c.params.n_sites - 1).real());
    out += csv_line(row);
  }
  return out;
}

/// Every closed-form limit that applies to the given parameters; entries
/// that are undefined there are null.
inline std::string cmd_limits(const RunConfig& c) {
  if (!c.has_network) throw ConfigError("limits needs 'N'");
  const auto* sup = std::get_if<SymmetricSuperposition>(&c.initial);
  if (!sup) throw ConfigError("limits needs 's', not a density matrix");
  require_valid(c.params, c.initial, true);
  const NetworkParams& p = c.params;
  const int s = sup->s;
  const int n = p.n_sites;
  const double delta = detuning(p);
  namespace cf = closed_form;

  json j;
  j["params"] = {{"N", n},      {"J", p.coupling},          {"eps_n", p.trap_energy}, {"delta", delta},
                 {"kappa", p.trap_rate}, {"gamma", p.decay_rate}, {"lambda", p.dephasing_rate}, {"s", s}};
  j["efficiency"] = try_value([&] { return cf::efficiency_cf(p, s); });
  j["rate"] = try_value([&] { return cf::rate_cf(p, s); });
  j["transfer_time"] = try_value([&] { return cf::transfer_time_cf(p, s); });
  j["alpha"] = {{"alpha1", try_value([&] { return cf::alpha_coeffs(p, s).alpha1; })},
                {"alpha2", try_value([&] { return cf::alpha_coeffs(p, s).alpha2; })}};
  j["beta"] = {{"beta1", try_value([&] { return cf::beta_coeffs(p, s).beta1; })},
               {"beta2", try_value([&] { return cf::beta_coeffs(p, s).beta2; })}};
  j["efficiency_coherent_limit"] = cf::efficiency_coherent_limit(n, s);
  j["rate_without_decay"] = try_value([&] { return cf::rate_without_decay(p, s); });
  j["weak_decay_efficiency"] = try_value([&] { return cf::weak_decay_efficiency(p, s); });
  const auto coh = cf::coherent_rate(p, s);
  j["coherent_rate"] = {{"rate", coh.rate}, {"kappa_star", coh.kappa_star}, {"rate_max", coh.rate_max}};
  j["coherent_efficiency_max"] = cf::coherent_efficiency_max(n, p.coupling, delta, p.decay_rate);
  if (n >= 3) {
    const auto o = cf::enaqt_optimum(n, p.coupling, delta);
    j["enaqt_optimum"] = {{"c_ratio", o.c_ratio},
                          {"kappa_opt", o.kappa_opt},
                          {"lambda_opt", o.lambda_opt},
                          {"rate_opt", o.rate_opt}};
    j["kappa_root_small_dephasing"] = cf::kappa_root_small_dephasing(n, p.coupling, delta);
    j["lambda_root_small_trapping"] = cf::lambda_root_small_trapping(n, p.coupling, delta);
    if (p.trap_rate > 0.0 && p.dephasing_rate > 0.0) {
      const auto [rk, rl] = cf::stationarity_residuals(n, p.coupling, delta, p.trap_rate, p.dephasing_rate);
      j["stationarity_residuals"] = {rk, rl};
    } else {
      j["stationarity_residuals"] = nullptr;
    }
  } else {
    j["enaqt_optimum"] = nullptr;
  }
  return j.dump(2) + "\n";
}

/// Returns the JSON summary and whether every suite passed.
inline std::pair<std::string, bool> cmd_validate(const RunConfig& c, std::optional<std::uint64_t> seed, int threads) {
  detail::reject_unknown(c.validate, {"draws", "full_draws", "brute_draws"}, "validate");
  validation::ValidationOptions opt;
  opt.seed = seed ? *seed : c.seed.value_or(validation::kDefaultSeed);
  opt.draws = detail::integer(c.validate, "draws", opt.draws);
  opt.full_draws = detail::integer(c.validate, "full_draws", opt.full_draws);
  opt.brute_draws = detail::integer(c.validate, "brute_draws", opt.brute_draws);
  opt.threads = threads;
  if (opt.draws < 1 || opt.full_draws < 1 || opt.brute_draws < 1) throw ConfigError("draw counts must be >= 1");

  const auto suites = validation::run_all(opt);
  bool pass = true;
  json j;
  j["seed"] = opt.seed;
  j["suites"] = json::array();
  for (const auto& s : suites) {
    pass = pass && s.pass();
    j["suites"].push_back({{"name", s.name},
                           {"draws", s.draws},
                           {"failures", s.failures},
                           {"max_error", s.max_error},
                           {"tolerance", s.tolerance},
                           {"note", s.note},
                           {"pass", s.pass()}});
  }
  j["pass"] = pass;
  return {j.dump(2) + "\n", pass};
}

// ---- entry point ----------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transport efficiency and rate on the fully connected network"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config_path, "JSON config path");
  app.add_option("--out", flags.out_path, "output path (default stdout)");
  app.add_option("--solver", flags.solver, "closed_form, reduced, full or brute")
      ->check(CLI::IsMember({"closed_form", "reduced", "full", "brute"}));
  app.add_option("--seed", flags.seed, "random seed for validate");
  app.add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);
  for (const char* name : {"sweep", "optimize", "validate", "trajectory", "limits"})
    app.add_subcommand(name)->callback([&flags, name] { flags.command = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kBadConfig;
  }

  std::string result;
  int code = kOk;
  try {
    RunConfig config;
    if (!flags.config_path.empty()) config = load_config(flags.config_path);
    else if (flags.command != "validate") throw ConfigError(flags.command + " needs --config");
    if (flags.solver) config.solver = detail::solver_named(*flags.solver);

    if (flags.command == "sweep") result = cmd_sweep(config, flags.threads);
    else if (flags.command == "optimize") result = cmd_optimize(config, flags.threads);
    else if (flags.command == "trajectory") result = cmd_trajectory(config);
    else if (flags.command == "limits") result = cmd_limits(config);
    else {
      auto [text, pass] = cmd_validate(config, flags.seed, flags.threads);
      result = std::move(text);
      if (!pass) code = kValidationFailure;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const InvalidInput& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return kBadConfig;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverError;
  }

  if (flags.out_path.empty()) {
    out << result;
  } else {
    std::ofstream file(flags.out_path, std::ios::binary);
    if (!file || !(file << result)) {
      err << "cannot write '" << flags.out_path << "'\n";
      return kBadConfig;
    }
  }
  return code;
}

}  // namespace enaqt::cli
