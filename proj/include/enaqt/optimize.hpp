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

// Parameter sweeps and (lambda, kappa) maximization of transport figures
// of merit, with comparisons against the analytic optima.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enaqt/closed_form.hpp"
#include "enaqt/full_lindblad.hpp"
#include "enaqt/model.hpp"
#include "enaqt/nelder_mead.hpp"
#include "enaqt/parallel.hpp"
#include "enaqt/reduced_dynamics.hpp"

namespace enaqt::optimize {

enum class Objective { efficiency, rate, transfer_time };
enum class Solver { closed_form, reduced, full, brute };
enum class Spacing { linear, log };

inline std::optional<Objective> parse_objective(std::string_view s) {
  if (s == "efficiency") return Objective::efficiency;
  if (s == "rate") return Objective::rate;
  if (s == "transfer_time") return Objective::transfer_time;
  return std::nullopt;
}

inline std::optional<Solver> parse_solver(std::string_view s) {
  if (s == "closed_form") return Solver::closed_form;
  if (s == "reduced") return Solver::reduced;
  if (s == "full") return Solver::full;
  if (s == "brute") return Solver::brute;
  return std::nullopt;
}

inline std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::closed_form: return "closed_form";
    case Solver::reduced: return "reduced";
    case Solver::full: return "full";
    case Solver::brute: return "brute";
  }
  return "unknown";
}

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::efficiency: return "efficiency";
    case Objective::rate: return "rate";
    case Objective::transfer_time: return "transfer_time";
  }
  return "unknown";
}

/// Transport through whichever solver is selected. The closed form only
/// covers symmetric superposition states.
inline TransportResult evaluate(const NetworkParams& p, const InitialCondition& init, Solver solver) {
  switch (solver) {
    case Solver::closed_form: {
      const auto* sup = std::get_if<SymmetricSuperposition>(&init);
      if (!sup) throw InvalidInput("closed_form solver needs a symmetric superposition state");
      return closed_form::transport_cf(p, sup->s);
    }
    case Solver::reduced:
      return reduced::transport(p, reduced_initial_vector(init, p.n_sites));
    case Solver::full:
    case Solver::brute: {
      const DensityMatrix rho = std::holds_alternative<DensityMatrix>(init)
                                    ? std::get<DensityMatrix>(init)
                                    : superposition_density(p.n_sites, std::get<SymmetricSuperposition>(init).s);
      return solver == Solver::full ? full::transport_full(p, rho) : full::brute_force_eta_tau(p, rho);
    }
  }
  throw InvalidInput("unknown solver");
}

/// The objective as a quantity to maximize; transfer time is negated.
/// NaN marks points where the objective is undefined.
inline double score(const TransportResult& r, Objective o) {
  switch (o) {
    case Objective::efficiency: return r.transfer_time ? r.efficiency : std::nan("");
    case Objective::rate: return r.rate;
    case Objective::transfer_time:
      return r.transfer_time ? -*r.transfer_time : std::nan("");
  }
  return std::nan("");
}

// ---- sweeps ---------------------------------------------------------------

struct Axis {
  std::string name;  // lambda, kappa, gamma, delta, eps_n or J
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  Spacing spacing = Spacing::linear;

  std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
    if (count == 1) {
      out[0] = min;
      return out;
    }
    for (int i = 0; i < count; ++i) {
      const double f = static_cast<double>(i) / (count - 1);
      out[i] = spacing == Spacing::linear ? min + f * (max - min)
                                          : std::exp(std::log(min) + f * (std::log(max) - std::log(min)));
    }
    out.back() = max;
    return out;
  }
};

inline bool is_axis_name(std::string_view n) {
  return n == "lambda" || n == "kappa" || n == "gamma" || n == "delta" || n == "eps_n" || n == "J";
}

inline void apply_axis(NetworkParams& p, std::string_view name, double value) {
  if (name == "lambda") p.dephasing_rate = value;
  else if (name == "kappa") p.trap_rate = value;
  else if (name == "gamma") p.decay_rate = value;
  else if (name == "delta") p = with_detuning(p, value);
  else if (name == "eps_n") p.trap_energy = value;
  else if (name == "J") p.coupling = value;
  else throw InvalidInput("unknown sweep axis '" + std::string(name) + "'");
}

struct SweepSpec {
  NetworkParams base;
  InitialCondition initial = SymmetricSuperposition{1};
  std::vector<Axis> axes;
  Objective objective = Objective::efficiency;
  Solver solver = Solver::closed_form;
};

/// A single cell may be requested with count = 1 and min = max.
inline std::vector<std::string> validate_sweep(const SweepSpec& spec) {
  std::vector<std::string> out;
  if (spec.axes.empty() || spec.axes.size() > 2) out.emplace_back("sweep needs 1 or 2 axes");
  for (const auto& a : spec.axes) {
    if (!is_axis_name(a.name)) out.push_back("unknown axis '" + a.name + "'");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) out.push_back("axis '" + a.name + "' bounds must be finite");
    if (a.count < 1) out.push_back("axis '" + a.name + "' count must be >= 1");
    else if (a.count == 1 && a.min != a.max) out.push_back("axis '" + a.name + "' with count 1 needs min == max");
    else if (a.count >= 2 && !(a.min < a.max)) out.push_back("axis '" + a.name + "' needs min < max");
    if (a.spacing == Spacing::log && !(a.min > 0.0)) out.push_back("log axis '" + a.name + "' needs min > 0");
  }
  if (spec.axes.size() == 2 && spec.axes[0].name == spec.axes[1].name) out.emplace_back("axes must differ");
  return out;
}

struct SweepRow {
  std::vector<double> coords;
  double eta = std::nan("");
  double tau = std::nan("");
  double rate = std::nan("");
  bool missing = true;
};

/// Row-major over the axes (the first axis varies slowest). Cells where the
/// solver has no finite answer come back with missing = true.
inline std::vector<SweepRow> sweep(const SweepSpec& spec, int threads = 1) {
  if (auto v = validate_sweep(spec); !v.empty()) throw InvalidInput(join_violations(v));
  std::vector<std::vector<double>> grids;
  for (const auto& a : spec.axes) grids.push_back(a.points());
  const std::size_t inner = grids.size() == 2 ? grids[1].size() : 1;
  const std::size_t total = grids[0].size() * inner;
  std::vector<SweepRow> rows(total);
  parallel_for(total, threads, [&](std::size_t i) {
    SweepRow& row = rows[i];
    NetworkParams p = spec.base;
    row.coords.push_back(grids[0][i / inner]);
    apply_axis(p, spec.axes[0].name, row.coords.back());
    if (grids.size() == 2) {
      row.coords.push_back(grids[1][i % inner]);
      apply_axis(p, spec.axes[1].name, row.coords.back());
    }
    try {
      const TransportResult r = evaluate(p, spec.initial, spec.solver);
      if (!r.transfer_time || !std::isfinite(r.efficiency) || !std::isfinite(r.rate)) return;
      row.eta = r.efficiency;
      row.tau = *r.transfer_time;
      row.rate = r.rate;
      row.missing = !std::isfinite(row.tau);
    } catch (const DegenerateDenominator&) {
    } catch (const SingularGenerator&) {
    }
  });
  return rows;
}

// ---- maximization over (lambda, kappa) ------------------------------------

struct MaximizeOptions {
  Objective objective = Objective::efficiency;
  Solver solver = Solver::closed_form;
  double lambda_bound = 100.0;  // domain is [0, bound] on each axis
  double kappa_bound = 100.0;
  int grid = 5;                 // grid x grid multistart seeds
  opt::NelderMeadOptions nelder_mead{};
  double tie_tol = 1e-9;
  int threads = 1;
};

struct AnalyticComparison {
  closed_form::OptimalConditions enaqt;
  double kappa_rel_delta = 0.0;
  double lambda_rel_delta = 0.0;
  std::optional<double> rate_rel_delta;        // rate objective with Gamma = 0
  std::optional<double> coherent_eta_max;      // s = N - 1
};

struct OptimumReport {
  double lambda = 0.0;
  double kappa = 0.0;
  double value = 0.0;  // the objective itself (transfer time is not negated)
  bool boundary_flag = false;
  bool converged = false;
  double best_grid_value = -std::numeric_limits<double>::infinity();
  int runs = 0;
  std::optional<AnalyticComparison> analytic;
};

namespace detail {

struct Candidate {
  opt::Point<2> x;  // (lambda, kappa)
  double score = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

template <std::size_t Dim, typename F>
opt::NelderMeadResult<Dim> polished_nelder_mead(F&& f, const opt::Point<Dim>& start,
                                                const opt::Point<Dim>& step, const opt::Box<Dim>& box,
                                                const opt::NelderMeadOptions& nm) {
  auto first = opt::nelder_mead<Dim>(f, start, step, box, nm);
  // One restart from the converged vertex guards against a collapsed simplex.
  opt::Point<Dim> small = step;
  for (auto& v : small) v *= 1e-2;
  auto second = opt::nelder_mead<Dim>(f, first.x, small, box, nm);
  if (second.value <= first.value) {
    second.iterations += first.iterations;
    second.evaluations += first.evaluations;
    second.converged = second.converged && first.converged;
    return second;
  }
  return first;
}

}  // namespace detail

/// Multistart Nelder-Mead over (lambda, kappa) in [0, lambda_bound] x
/// [0, kappa_bound], plus one-dimensional searches along the lambda = 0,
/// lambda = bound and kappa = bound edges. `fixed` supplies every other
/// parameter; its kappa and lambda are ignored.
inline OptimumReport maximize(const NetworkParams& fixed, const InitialCondition& init,
                              const MaximizeOptions& options = {}) {
  const double lb = options.lambda_bound;
  const double kb = options.kappa_bound;
  if (!(lb > 0.0) || !(kb > 0.0)) throw InvalidInput("search bounds must be > 0");
  if (options.grid < 1) throw InvalidInput("multistart grid must be >= 1");

  auto objective = [&](double lambda, double kappa) {
    NetworkParams p = fixed;
    p.dephasing_rate = lambda;
    p.trap_rate = kappa;
    try {
      return score(evaluate(p, init, options.solver), options.objective);
    } catch (const DegenerateDenominator&) {
      return std::nan("");
    } catch (const SingularGenerator&) {
      return std::nan("");
    }
  };
  auto negated = [&](const opt::Point<2>& x) { return -objective(x[0], x[1]); };

  const int g = options.grid;
  std::vector<opt::Point<2>> seeds;
  for (int i = 0; i < g; ++i)
    for (int k = 0; k < g; ++k) seeds.push_back({lb * (i + 0.5) / g, kb * (k + 0.5) / g});

  // Edge searches: (which coordinate is pinned, pinned value).
  struct Edge {
    int pinned;
    double value;
  };
  const std::vector<Edge> edges = {{0, 0.0}, {0, lb}, {1, kb}};

  const std::size_t n_interior = seeds.size();
  const std::size_t n_edge = edges.size() * static_cast<std::size_t>(g);
  std::vector<detail::Candidate> candidates(n_interior + n_edge);
  std::vector<double> grid_values(n_interior);

  const opt::Box<2> box{{0.0, 0.0}, {lb, kb}};
  const opt::Point<2> step{0.5 * lb / g, 0.5 * kb / g};

  parallel_for(candidates.size(), options.threads, [&](std::size_t i) {
    detail::Candidate& c = candidates[i];
    if (i < n_interior) {
      grid_values[i] = objective(seeds[i][0], seeds[i][1]);
      const auto r = detail::polished_nelder_mead<2>(negated, seeds[i], step, box, options.nelder_mead);
      c.x = r.x;
      c.score = -r.value;
      c.converged = r.converged;
      return;
    }
    const std::size_t e = (i - n_interior) / g;
    const int k = static_cast<int>((i - n_interior) % g);
    const Edge edge = edges[e];
    const int free_axis = 1 - edge.pinned;
    const double bound = free_axis == 0 ? lb : kb;
    auto along_edge = [&](const opt::Point<1>& t) {
      opt::Point<2> x;
      x[edge.pinned] = edge.value;
      x[free_axis] = t[0];
      return negated(x);
    };
    const opt::Box<1> line{{0.0}, {bound}};
    const auto r = detail::polished_nelder_mead<1>(along_edge, {bound * (k + 0.5) / g},
                                                   {0.5 * bound / g}, line, options.nelder_mead);
    c.x[edge.pinned] = edge.value;
    c.x[free_axis] = r.x[0];
    c.score = -r.value;
    c.converged = r.converged;
  });

  OptimumReport report;
  report.runs = static_cast<int>(candidates.size());
  for (double v : grid_values)
    if (std::isfinite(v)) report.best_grid_value = std::max(report.best_grid_value, v);

  // Order by score, then coordinates, so the result does not depend on
  // seed order. Runs that landed on the same optimum are merged.
  std::vector<detail::Candidate> sorted;
  for (const auto& c : candidates)
    if (std::isfinite(c.score)) sorted.push_back(c);
  if (sorted.empty()) throw NonConvergent("objective undefined on every multistart seed");
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.x < b.x;
  });
  std::vector<detail::Candidate> distinct;
  for (const auto& c : sorted) {
    const bool same = std::any_of(distinct.begin(), distinct.end(), [&](const auto& d) {
      return opt::distance(c.x, d.x) < 1e-3 * std::max(1.0, opt::euclidean_norm(d.x));
    });
    if (!same) distinct.push_back(c);
  }
  const detail::Candidate* best = &distinct.front();
  for (const auto& c : distinct)
    if (best->score - c.score <= options.tie_tol && c.x < best->x) best = &c;

  if (!best->converged)
    throw NonConvergent("Nelder-Mead reached its iteration cap before the simplex collapsed");

  report.lambda = best->x[0];
  report.kappa = best->x[1];
  report.value = options.objective == Objective::transfer_time ? -best->score : best->score;
  report.converged = true;
  const double lt = 1e-6 * lb;
  const double kt = 1e-6 * kb;
  report.boundary_flag = report.lambda <= lt || report.lambda >= lb - lt || report.kappa <= kt ||
                         report.kappa >= kb - kt;

  const auto* sup = std::get_if<SymmetricSuperposition>(&init);
  if (sup && fixed.n_sites >= 3) {
    AnalyticComparison a;
    a.enaqt = closed_form::enaqt_optimum(fixed.n_sites, fixed.coupling, detuning(fixed));
    a.kappa_rel_delta = (report.kappa - a.enaqt.kappa_opt) / a.enaqt.kappa_opt;
    a.lambda_rel_delta = (report.lambda - a.enaqt.lambda_opt) / a.enaqt.lambda_opt;
    if (options.objective == Objective::rate && fixed.decay_rate == 0.0 && sup->s == 1)
      a.rate_rel_delta = (report.value - a.enaqt.rate_opt) / a.enaqt.rate_opt;
    if (sup->s == fixed.n_sites - 1)
      a.coherent_eta_max = closed_form::coherent_efficiency_max(fixed.n_sites, fixed.coupling,
                                                                detuning(fixed), fixed.decay_rate);
    report.analytic = a;
  }
  return report;
}

struct VerifyReport {
  OptimumReport numeric;
  closed_form::OptimalConditions analytic;
  double kappa_rel_delta = 0.0;
  double lambda_rel_delta = 0.0;
  double rate_rel_delta = 0.0;
  std::pair<double, double> residuals_numeric;
  std::pair<double, double> residuals_analytic;
};

/// Maximizes the decay-free s = 1 rate numerically and compares with the
/// analytic stationary point. The search box is widened to at least twice
/// the analytic optimum so that the optimum stays interior, and the simplex
/// tolerance is tightened to resolve the optimum to better than 1e-6.
inline VerifyReport verify_optimum(int n_sites, double coupling, double delta, MaximizeOptions options = {}) {
  if (n_sites < 3) throw InvalidInput("verify_optimum needs N >= 3");
  VerifyReport v;
  v.analytic = closed_form::enaqt_optimum(n_sites, coupling, delta);
  NetworkParams p;
  p.n_sites = n_sites;
  p.coupling = coupling;
  p = with_detuning(p, delta);
  p.decay_rate = 0.0;
  options.objective = Objective::rate;
  options.nelder_mead.x_tol = std::min(options.nelder_mead.x_tol, 1e-10);
  const double reach = 2.0 * std::max(v.analytic.kappa_opt, v.analytic.lambda_opt);
  options.lambda_bound = std::max(options.lambda_bound, reach);
  options.kappa_bound = std::max(options.kappa_bound, reach);
  v.numeric = maximize(p, SymmetricSuperposition{1}, options);
  if (options.solver == Solver::closed_form) {
    // The rate is flat to second order at the optimum, so a double-precision
    // search stalls near sqrt(eps). A last pass in long double resolves it.
    auto negated_rate = [&](const opt::Point<2>& x) -> long double {
      NetworkParams q = p;
      q.dephasing_rate = x[0];
      q.trap_rate = x[1];
      try {
        return -closed_form::rate_cf<long double>(q, 1);
      } catch (const DegenerateDenominator&) {
        return std::numeric_limits<long double>::quiet_NaN();
      }
    };
    const opt::Box<2> box{{0.0, 0.0}, {options.lambda_bound, options.kappa_bound}};
    opt::NelderMeadOptions nm = options.nelder_mead;
    nm.x_tol = 1e-12;
    const opt::Point<2> start{v.numeric.lambda, v.numeric.kappa};
    const opt::Point<2> step{1e-4 * std::max(1.0, start[0]), 1e-4 * std::max(1.0, start[1])};
    const auto fine = opt::nelder_mead<2>(negated_rate, start, step, box, nm);
    if (fine.converged) {
      v.numeric.lambda = fine.x[0];
      v.numeric.kappa = fine.x[1];
      v.numeric.value = -fine.value;
    }
  }
  v.kappa_rel_delta = (v.numeric.kappa - v.analytic.kappa_opt) / v.analytic.kappa_opt;
  v.lambda_rel_delta = (v.numeric.lambda - v.analytic.lambda_opt) / v.analytic.lambda_opt;
  v.rate_rel_delta = (v.numeric.value - v.analytic.rate_opt) / v.analytic.rate_opt;
  v.residuals_numeric =
      closed_form::stationarity_residuals(n_sites, coupling, delta, v.numeric.kappa, v.numeric.lambda);
  v.residuals_analytic = closed_form::stationarity_residuals(n_sites, coupling, delta, v.analytic.kappa_opt,
                                                             v.analytic.lambda_opt);
  return v;
}

}  // namespace enaqt::optimize
