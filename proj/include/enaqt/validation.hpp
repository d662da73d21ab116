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

// Seeded cross-checks between the closed form, the reduced system, the
// full superoperator and brute-force integration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "enaqt/closed_form.hpp"
#include "enaqt/full_lindblad.hpp"
#include "enaqt/parallel.hpp"
#include "enaqt/random.hpp"
#include "enaqt/reduced_dynamics.hpp"

namespace enaqt::validation {

inline constexpr std::uint64_t kDefaultSeed = 20260101;

struct ValidationOptions {
  std::uint64_t seed = kDefaultSeed;
  int draws = 200;        // closed form vs reduced, conservation, limits
  int full_draws = 20;    // reduced vs full superoperator
  int brute_draws = 5;    // full superoperator vs adaptive integration
  int threads = 1;
};

struct SuiteResult {
  std::string name;
  int draws = 0;
  int failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string note;
  bool pass() const { return failures == 0; }
};

/// splitmix64 finalizer; gives every draw its own stream so results do not
/// depend on the thread count.
inline std::uint64_t draw_seed(std::uint64_t seed, std::uint64_t suite, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (suite * 1000003ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double rel_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

namespace detail {

// Runs `check(sampler)` for each draw; it returns the error of that draw.
template <typename Check>
SuiteResult run_suite(std::string name, int suite_id, int draws, double tolerance,
                      const ValidationOptions& opt, Check&& check) {
  std::vector<double> errors(static_cast<std::size_t>(std::max(draws, 0)), 0.0);
  std::vector<std::string> messages(errors.size());
  parallel_for(errors.size(), opt.threads, [&](std::size_t i) {
    Sampler rng(draw_seed(opt.seed, static_cast<std::uint64_t>(suite_id), i));
    try {
      errors[i] = check(rng);
    } catch (const Error& e) {
      errors[i] = std::nan("");
      messages[i] = e.what();
    }
  });
  SuiteResult r;
  r.name = std::move(name);
  r.draws = draws;
  r.tolerance = tolerance;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] <= tolerance)) {
      ++r.failures;
      if (r.note.empty()) r.note = "draw " + std::to_string(i) + (messages[i].empty() ? "" : ": " + messages[i]);
    }
    if (std::isfinite(errors[i])) r.max_error = std::max(r.max_error, errors[i]);
  }
  return r;
}

inline NetworkParams draw_params(Sampler& rng, int min_sites, int max_sites, double lo, double hi,
                                 double delta_range) {
  NetworkParams p;
  p.n_sites = rng.integer(min_sites, max_sites);
  p.coupling = 1.0;
  p.trap_rate = rng.log_uniform(lo, hi);
  p.decay_rate = rng.log_uniform(lo, hi);
  p.dephasing_rate = rng.log_uniform(lo, hi);
  return with_detuning(p, rng.uniform(-delta_range, delta_range));
}

}  // namespace detail

inline std::vector<SuiteResult> run_all(const ValidationOptions& opt = {}) {
  std::vector<SuiteResult> out;

  out.push_back(detail::run_suite("closed_form_vs_reduced", 1, opt.draws, 1e-10, opt, [](Sampler& rng) {
    const NetworkParams p = detail::draw_params(rng, 2, 50, 1e-3, 1e3, 1e3);
    const int s = rng.integer(1, p.n_sites - 1);
    const auto r = reduced::transport(p, {0, 0, 0, static_cast<double>(s), 1});
    return std::max(rel_error(closed_form::efficiency_cf(p, s), r.efficiency),
                    rel_error(closed_form::rate_cf(p, s), r.rate));
  }));

  out.push_back(detail::run_suite("conservation", 2, opt.draws, 1e-10, opt, [](Sampler& rng) {
    const NetworkParams p = detail::draw_params(rng, 2, 50, 1e-3, 1e3, 1e3);
    const int s = rng.integer(1, p.n_sites - 1);
    const auto r = reduced::transport(p, {0, 0, 0, static_cast<double>(s), 1});
    return std::abs(r.efficiency + r.decay_loss - 1.0);
  }));

  out.push_back(detail::run_suite("limits", 3, opt.draws, 1e-12, opt, [](Sampler& rng) {
    NetworkParams p = detail::draw_params(rng, 2, 50, 1e-3, 1e3, 1e3);
    const int s = rng.integer(1, p.n_sites - 1);
    const double parity = std::abs(closed_form::efficiency_cf(p, s) -
                                   closed_form::efficiency_cf(with_detuning(p, -detuning(p)), s));
    p.decay_rate = 0.0;
    const double unit = std::abs(reduced::transport(p, {0, 0, 0, static_cast<double>(s), 1}).efficiency - 1.0);
    return std::max(parity, unit);
  }));

  out.push_back(detail::run_suite("reduced_vs_full", 4, opt.full_draws, 1e-8, opt, [](Sampler& rng) {
    const NetworkParams p = detail::draw_params(rng, 2, 8, 1e-2, 1e2, 10.0);
    const DensityMatrix rho = rng.density_matrix(p.n_sites);
    const auto f = full::transport_full(p, rho);
    const auto r = reduced::transport(p, full::reduce_state(rho));
    return std::max(rel_error(f.efficiency, r.efficiency), rel_error(*f.transfer_time, *r.transfer_time));
  }));

  out.push_back(detail::run_suite("full_vs_brute", 5, opt.brute_draws, 1e-6, opt, [](Sampler& rng) {
    NetworkParams p = detail::draw_params(rng, 2, 5, 1e-1, 1e1, 5.0);
    p.decay_rate = rng.log_uniform(5e-2, 1.0);
    const DensityMatrix rho = rng.density_matrix(p.n_sites);
    const auto b = full::brute_force_eta_tau(p, rho);
    const auto f = full::transport_full(p, rho);
    return std::max(rel_error(b.efficiency, f.efficiency), rel_error(*b.transfer_time, *f.transfer_time));
  }));

  // kappa = Gamma = 0 must be refused by every solver, not answered.
  SuiteResult expected;
  expected.name = "expected_error_no_absorption";
  expected.draws = 3;
  expected.note = "kappa = Gamma = 0 rejected as singular";
  NetworkParams p;
  p.n_sites = 4;
  p.dephasing_rate = 1.0;
  auto refuses = [](auto&& call) {
    try {
      call();
    } catch (const SingularGenerator&) {
      return true;
    } catch (const DegenerateDenominator&) {
      return true;
    }
    return false;
  };
  if (!refuses([&] { reduced::transport(p, {0, 0, 0, 1, 1}); })) ++expected.failures;
  if (!refuses([&] { full::transport_full(p, localized_density(4, 0)); })) ++expected.failures;
  if (!refuses([&] { closed_form::efficiency_cf(p, 1); })) ++expected.failures;
  out.push_back(expected);
  return out;
}

}  // namespace enaqt::validation
