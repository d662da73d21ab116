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

// Analytical transport results for the symmetric s-site initial state.
//
// The general efficiency and rate are
//   eta = 1 / (alpha1 + alpha2 Delta^2 / J^2),
//   R   = 2 kappa / (beta1 + beta2 Delta^2 / J^2),
// with the coefficients below. The limiting forms (no dephasing, no decay,
// two sites) are written out separately rather than obtained by
// substitution, so each can be checked against the general expression.

#include <cmath>
#include <concepts>
#include <string>
#include <utility>

#include "enaqt/model.hpp"

namespace enaqt::closed_form {

template <std::floating_point Real = double>
struct EffCoefficients {
  Real alpha1 = 0;
  Real alpha2 = 0;
};

template <std::floating_point Real = double>
struct RateCoefficients {
  Real beta1 = 0;
  Real beta2 = 0;
};

struct OptimalConditions {
  double c_ratio = 0.0;
  double kappa_opt = 0.0;
  double lambda_opt = 0.0;
  double rate_opt = 0.0;
};

struct CoherentRate {
  double rate = 0.0;        // R at the given kappa
  double kappa_star = 0.0;  // kappa maximizing R
  double rate_max = 0.0;
};

namespace detail {

template <std::floating_point Real>
Real mixing_denominator(const NetworkParams& p, int s) {
  const Real d = Real(p.dephasing_rate) + Real(2 * s) * Real(p.decay_rate);
  if (!(d > 0.0)) throw DegenerateDenominator("lambda + 2 s Gamma = 0");
  return d;
}

inline void require_trapping(const NetworkParams& p) {
  if (!(p.trap_rate > 0.0)) throw DegenerateDenominator("kappa = 0");
}

template <std::floating_point Real>
Real delta_ratio_sq(const NetworkParams& p) {
  const Real r = Real(detuning(p)) / Real(p.coupling);
  return r * r;
}

}  // namespace detail

template <std::floating_point Real = double>
EffCoefficients<Real> alpha_coeffs(const NetworkParams& p, int s) {
  const Real d = detail::mixing_denominator<Real>(p, s);
  detail::require_trapping(p);
  const Real n = p.n_sites;
  const Real j2 = Real(p.coupling) * Real(p.coupling);
  const Real k = p.trap_rate;
  const Real g = p.decay_rate;
  const Real l = p.dephasing_rate;
  EffCoefficients<Real> c;
  c.alpha1 = (l * (k + n * g) + 2.0 * (n - 1.0) * g * (k + 2.0 * g)) / (k * d) +
             g * (k + g) * (l + 2.0 * g) * (k + l + 2.0 * g) / (j2 * k * d);
  c.alpha2 = g * (k + g) * (l + 2.0 * g) / (k * (k + l + 2.0 * g) * d);
  return c;
}

template <std::floating_point Real = double>
RateCoefficients<Real> beta_coeffs(const NetworkParams& p, int s) {
  const Real d = detail::mixing_denominator<Real>(p, s);
  const Real n = p.n_sites;
  const Real j2 = Real(p.coupling) * Real(p.coupling);
  const Real k = p.trap_rate;
  const Real g = p.decay_rate;
  const Real l = p.dephasing_rate;
  const Real klg = k + l + 2 * g;
  RateCoefficients<Real> c;
  c.beta1 = (2.0 * (n - s - 1.0) * k * l + n * l * l + 8.0 * (n - 1.0) * g * (l + s * g)) / (d * d) +
            g * ((k + g) * (2.0 * k + 4.0 * l + 8.0 * g) + (l + 2.0 * g) * klg) / (j2 * d) +
            l * (l + 2.0 * g) * (k + g) * klg / (j2 * d * d);
  c.beta2 = l * (l + 2.0 * g) * (k + g) / (klg * d * d) +
            2.0 * g * k * (k + g) / (klg * klg * d) + g * (l + 2.0 * g) / (klg * d);
  return c;
}

template <std::floating_point Real>
Real efficiency_from(const EffCoefficients<Real>& c, const NetworkParams& p) {
  return 1 / (c.alpha1 + c.alpha2 * detail::delta_ratio_sq<Real>(p));
}

template <std::floating_point Real>
Real rate_from(const RateCoefficients<Real>& c, const NetworkParams& p) {
  return 2 * Real(p.trap_rate) / (c.beta1 + c.beta2 * detail::delta_ratio_sq<Real>(p));
}

template <std::floating_point Real = double>
Real efficiency_cf(const NetworkParams& p, int s) {
  return efficiency_from(alpha_coeffs<Real>(p, s), p);
}

template <std::floating_point Real = double>
Real rate_cf(const NetworkParams& p, int s) {
  return rate_from(beta_coeffs<Real>(p, s), p);
}

inline double transfer_time_cf(const NetworkParams& p, int s) {
  return efficiency_cf(p, s) / rate_cf(p, s);
}

inline TransportResult transport_cf(const NetworkParams& p, int s) {
  TransportResult r;
  r.source = Source::closed_form;
  r.efficiency = efficiency_cf(p, s);
  r.rate = rate_cf(p, s);
  r.transfer_time = r.efficiency / r.rate;
  r.decay_loss = 1.0 - r.efficiency;
  return r;
}

// ---- limiting forms -------------------------------------------------------

/// lambda = 0; the dephasing rate in `p` is ignored.
inline EffCoefficients<> alpha_no_dephasing(const NetworkParams& p, int s) {
  detail::require_trapping(p);
  const double n = p.n_sites;
  const double j2 = p.coupling * p.coupling;
  const double k = p.trap_rate;
  const double gk = p.decay_rate / k;
  EffCoefficients<> c;
  c.alpha1 = (n - 1.0) / s * (1.0 + 2.0 * gk) + k * p.decay_rate / (s * j2) * (1.0 + gk) * (1.0 + 2.0 * gk);
  c.alpha2 = p.decay_rate / (s * k) * (1.0 + gk) / (1.0 + 2.0 * gk);
  return c;
}

/// Gamma = 0 with lambda > 0: every excitation is eventually trapped.
inline EffCoefficients<> alpha_no_decay() { return {1.0, 0.0}; }

/// N = 2, s = 1, any lambda and Gamma.
inline EffCoefficients<> alpha_two_site(const NetworkParams& p) {
  detail::require_trapping(p);
  const double j2 = p.coupling * p.coupling;
  const double k = p.trap_rate;
  const double g = p.decay_rate;
  const double l = p.dephasing_rate;
  EffCoefficients<> c;
  c.alpha1 = (k + 2.0 * g) / k + g * (k + g) * (k + l + 2.0 * g) / (j2 * k);
  c.alpha2 = g * (k + g) / (k * (k + l + 2.0 * g));
  return c;
}

/// Efficiency for lambda = 0 followed by Gamma -> 0.
inline double efficiency_coherent_limit(int n_sites, int s) {
  return static_cast<double>(s) / (n_sites - 1);
}

/// lambda = 0; the dephasing rate in `p` is ignored.
inline RateCoefficients<> beta_no_dephasing(const NetworkParams& p, int s) {
  detail::require_trapping(p);
  const double n = p.n_sites;
  const double j2 = p.coupling * p.coupling;
  const double k = p.trap_rate;
  const double gk = p.decay_rate / k;
  const double one_plus = 1.0 + 2.0 * gk;
  RateCoefficients<> c;
  c.beta1 = 2.0 * (n - 1.0) / s + (k * k) / (s * j2) * (1.0 + 6.0 * gk + 6.0 * gk * gk);
  c.beta2 = (1.0 / s) / (one_plus * one_plus) * (1.0 + 2.0 * gk + 2.0 * gk * gk);
  return c;
}

/// Gamma = 0; the decay rate in `p` is ignored.
inline RateCoefficients<> beta_no_decay(const NetworkParams& p, int s) {
  if (!(p.dephasing_rate > 0.0)) throw DegenerateDenominator("lambda = 0 with Gamma = 0");
  const double n = p.n_sites;
  const double j2 = p.coupling * p.coupling;
  const double k = p.trap_rate;
  const double l = p.dephasing_rate;
  RateCoefficients<> c;
  c.beta1 = 2.0 * (n - s - 1.0) * k / l + n + k * (k + l) / j2;
  c.beta2 = k / (k + l);
  return c;
}

/// lambda = 0, Gamma -> 0: R = 2 s kappa / (2 (N-1) + (Delta^2 + kappa^2) / J^2),
/// maximal at kappa* = sqrt(2 (N-1) J^2 + Delta^2).
inline CoherentRate coherent_rate(const NetworkParams& p, int s) {
  const double n = p.n_sites;
  const double j2 = p.coupling * p.coupling;
  const double delta = detuning(p);
  const double k = p.trap_rate;
  CoherentRate c;
  c.rate = 2.0 * s * k / (2.0 * (n - 1.0) + (delta * delta + k * k) / j2);
  c.kappa_star = std::sqrt(2.0 * (n - 1.0) * j2 + delta * delta);
  c.rate_max = s * j2 / c.kappa_star;
  return c;
}

/// The rate with decay switched off, used by the weak-decay expansion.
/// Without dephasing this is the coherent rate.
inline double rate_without_decay(const NetworkParams& p, int s) {
  NetworkParams q = p;
  q.decay_rate = 0.0;
  if (q.dephasing_rate > 0.0) return rate_cf(q, s);
  return coherent_rate(q, s).rate;
}

/// eta ~ 1 / (1 + 2 Gamma / R0) for slow decay.
inline double weak_decay_efficiency(const NetworkParams& p, int s) {
  if (p.decay_rate == 0.0) return 1.0;
  return 1.0 / (1.0 + 2.0 * p.decay_rate / rate_without_decay(p, s));
}

/// Best efficiency of the fully coherent superposition (s = N-1, lambda = 0),
/// reached at kappa = sqrt(2 (N-1) J^2 + Delta^2).
inline double coherent_efficiency_max(int n_sites, double coupling, double delta, double decay) {
  const double j2 = coupling * coupling;
  const double kappa_star = std::sqrt(2.0 * (n_sites - 1.0) * j2 + delta * delta);
  const double rate_max = (n_sites - 1.0) * j2 / kappa_star;
  return 1.0 / (1.0 + 2.0 * decay / rate_max);
}

/// Simultaneous stationary point of the decay-free s = 1 rate in kappa and
/// lambda. Approximates the efficiency optimum when decay is slow.
inline OptimalConditions enaqt_optimum(int n_sites, double coupling, double delta) {
  const double n = n_sites;
  const double j2 = coupling * coupling;
  OptimalConditions o;
  o.c_ratio = std::sqrt(2.0 * (n - 2.0) / n);
  const double one_c = 1.0 + o.c_ratio;
  o.kappa_opt = std::sqrt(n * j2 + delta * delta / (one_c * one_c));
  o.lambda_opt = o.c_ratio * o.kappa_opt;
  o.rate_opt = j2 / std::sqrt(one_c * one_c * n * j2 + delta * delta);
  return o;
}

/// (r_kappa, r_lambda); both vanish where dR0/dkappa = dR0/dlambda = 0.
inline std::pair<double, double> stationarity_residuals(int n_sites, double coupling, double delta,
                                                        double kappa, double lambda) {
  const double n = n_sites;
  const double j2 = coupling * coupling;
  const double sum = kappa + lambda;
  const double detuned = delta * delta / (sum * sum);
  return {n * j2 / (kappa * kappa) - 1.0 + detuned,
          2.0 * (n - 2.0) * j2 / (lambda * lambda) - 1.0 + detuned};
}

/// Root of r_kappa as lambda -> 0.
inline double kappa_root_small_dephasing(int n_sites, double coupling, double delta) {
  return std::sqrt(n_sites * coupling * coupling + delta * delta);
}

/// Root of r_lambda as kappa -> 0.
inline double lambda_root_small_trapping(int n_sites, double coupling, double delta) {
  return std::sqrt(2.0 * (n_sites - 2.0) * coupling * coupling + delta * delta);
}

}  // namespace enaqt::closed_form
