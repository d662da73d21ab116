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

// Ground-truth dynamics on the complete N-site density matrix. The
// Lindblad generator is assembled as one real matrix acting on the
// stacked (Re rho, Im rho) vectorization, column-major over (j, k).

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include "enaqt/linalg.hpp"
#include "enaqt/model.hpp"

namespace enaqt::full {

inline constexpr int kDefaultMaxSites = 40;

struct Superoperator {
  int n_sites = 0;
  Eigen::MatrixXd l;  // 2N^2 x 2N^2

  Eigen::Index half() const { return static_cast<Eigen::Index>(n_sites) * n_sites; }
  Eigen::Index index(int j, int k) const { return j + static_cast<Eigen::Index>(n_sites) * k; }
};

/// Dephasing, decay and trapping rate on element (j, k); zero-based
/// indices with the trap at N - 1.
inline double damping(const NetworkParams& p, int j, int k) {
  const int trap = p.n_sites - 1;
  return (j != k ? p.dephasing_rate : 0.0) + 2.0 * p.decay_rate +
         ((j == trap ? 1.0 : 0.0) + (k == trap ? 1.0 : 0.0)) * p.trap_rate;
}

inline void check_cap(const NetworkParams& p, int max_sites) {
  if (p.n_sites > max_sites)
    throw DimensionCap("N = " + std::to_string(p.n_sites) + " exceeds the full-solver cap of " +
                       std::to_string(max_sites));
}

/// rho_jk' = -i (e_j - e_k) rho_jk - i J sum_l (rho_lk - rho_jl) - Lambda_jk rho_jk
/// with e_j = epsilon_N delta_{j,N}.
inline Superoperator build_superoperator(const NetworkParams& p, int max_sites = kDefaultMaxSites) {
  check_cap(p, max_sites);
  const int n = p.n_sites;
  Superoperator s;
  s.n_sites = n;
  const Eigen::Index h = s.half();
  s.l = Eigen::MatrixXd::Zero(2 * h, 2 * h);
  auto& l = s.l;
  const double jc = p.coupling;
  auto energy = [&](int site) { return site == n - 1 ? p.trap_energy : 0.0; };

  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Index re = s.index(j, k);
      const Eigen::Index im = h + re;
      const double split = energy(j) - energy(k);
      const double lam = damping(p, j, k);
      // -i c (a + i b) = c b - i c a
      l(re, im) += split;
      l(im, re) -= split;
      l(re, re) -= lam;
      l(im, im) -= lam;
      for (int m = 0; m < n; ++m) {
        l(re, h + s.index(m, k)) += jc;
        l(re, h + s.index(j, m)) -= jc;
        l(im, s.index(m, k)) -= jc;
        l(im, s.index(j, m)) += jc;
      }
    }
  }
  return s;
}

inline Eigen::VectorXd vectorize(const DensityMatrix& rho) {
  const Eigen::Index h = rho.size();
  Eigen::VectorXd v(2 * h);
  v.head(h) = rho.real().reshaped();
  v.tail(h) = rho.imag().reshaped();
  return v;
}

inline DensityMatrix unvectorize(const Eigen::VectorXd& v, int n_sites) {
  const Eigen::Index h = static_cast<Eigen::Index>(n_sites) * n_sites;
  DensityMatrix rho(n_sites, n_sites);
  rho.real() = v.head(h).reshaped(n_sites, n_sites);
  rho.imag() = v.tail(h).reshaped(n_sites, n_sites);
  return rho;
}

/// Aggregates of rho: (rho_NN, Re A_N, Im A_N, Sigma, Tr rho).
inline ReducedVector reduce_state(const DensityMatrix& rho) { return reduce_density(rho); }

namespace detail {

inline void require_density(const DensityMatrix& rho, int n_sites) {
  if (auto v = validate_density_matrix(rho, n_sites); !v.empty())
    throw InvalidInput(join_violations(v));
}

inline void check_evolved(const DensityMatrix& rho, double previous_trace, double t) {
  const auto where = " at t = " + std::to_string(t);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw InvariantViolation("evolved state lost Hermiticity" + where);
  const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-8)
    throw InvariantViolation("evolved state lost positivity" + where);
  if (rho.trace().real() > previous_trace + 1e-12)
    throw InvariantViolation("trace increased" + where);
}

}  // namespace detail

/// rho(t_k) = exp(L t_k) rho0, propagated between consecutive times.
/// Propagators are cached per time increment, so evenly spaced grids cost
/// one exponential.
inline std::vector<DensityMatrix> evolve(const NetworkParams& p, const DensityMatrix& rho0,
                                         std::span<const double> times,
                                         int max_sites = kDefaultMaxSites) {
  detail::require_density(rho0, p.n_sites);
  if (!times.empty() && times.front() < 0.0) throw InvalidInput("times must start at t >= 0");
  const Superoperator s = build_superoperator(p, max_sites);
  std::map<double, Eigen::MatrixXd> propagators;
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  Eigen::VectorXd state = vectorize(rho0);
  double now = 0.0;
  double trace = rho0.trace().real();
  for (double t : times) {
    if (t < now) throw InvalidInput("times must be ascending");
    const double step = t - now;
    if (step > 0.0) {
      // Reuse a propagator when steps differ only by rounding of the grid.
      auto it = propagators.lower_bound(step * (1.0 - 1e-12));
      if (it == propagators.end() || it->first > step * (1.0 + 1e-12))
        it = propagators.emplace(step, Eigen::MatrixXd((s.l * step).exp())).first;
      state = it->second * state;
      now = t;
    }
    DensityMatrix rho = unvectorize(state, p.n_sites);
    detail::check_evolved(rho, trace, t);
    trace = rho.trace().real();
    out.push_back(std::move(rho));
  }
  return out;
}

/// eta = -2 kappa [L^-1 rho0]_NN, tau = (2 kappa / eta) [L^-2 rho0]_NN.
inline TransportResult transport_full(const NetworkParams& p, const DensityMatrix& rho0,
                                      int max_sites = kDefaultMaxSites) {
  if (p.trap_rate == 0.0 && p.decay_rate == 0.0)
    throw SingularGenerator("no absorption: kappa = Gamma = 0");
  detail::require_density(rho0, p.n_sites);
  const Superoperator s = build_superoperator(p, max_sites);
  const linalg::RefinedLU<Eigen::MatrixXd> lu(s.l);
  const Eigen::VectorXd w = lu.solve(vectorize(rho0));
  const Eigen::VectorXd u = lu.solve(w);
  const Eigen::Index nn = s.index(p.n_sites - 1, p.n_sites - 1);

  double trace_integral = 0.0;
  for (int j = 0; j < p.n_sites; ++j) trace_integral += w(s.index(j, j));

  TransportResult r;
  r.source = Source::full;
  const double kappa = p.trap_rate;
  r.efficiency = -2.0 * kappa * w(nn);
  r.decay_loss = -2.0 * p.decay_rate * trace_integral;
  if (r.efficiency != 0.0) {
    r.transfer_time = 2.0 * kappa * u(nn) / r.efficiency;
    r.rate = r.efficiency / *r.transfer_time;
  }
  return r;
}

struct BruteForceOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-13;
  double trace_floor = 1e-12;     // stop once Tr rho drops below this
  double horizon_trace = 1e-9;    // population allowed to remain at t_cap
  double horizon_factor = 1e3;    // t_cap = factor / min positive {2 Gamma, 2 kappa / N}
  int max_sites = kDefaultMaxSites;
};

/// Direct quadrature of eta = 2 kappa int rho_NN dt and of the first
/// moment 2 kappa int t rho_NN dt, integrating the Lindblad equation with
/// an adaptive Dormand-Prince pair.
inline TransportResult brute_force_eta_tau(const NetworkParams& p, const DensityMatrix& rho0,
                                           const BruteForceOptions& opt = {}) {
  if (p.trap_rate == 0.0 && p.decay_rate == 0.0)
    throw SingularGenerator("no absorption: kappa = Gamma = 0");
  detail::require_density(rho0, p.n_sites);
  const Superoperator s = build_superoperator(p, opt.max_sites);
  const Eigen::Index dim = 2 * s.half();
  const Eigen::Index nn = s.index(p.n_sites - 1, p.n_sites - 1);
  const double two_kappa = 2.0 * p.trap_rate;

  double slowest = std::numeric_limits<double>::infinity();
  if (p.decay_rate > 0.0) slowest = std::min(slowest, 2.0 * p.decay_rate);
  if (p.trap_rate > 0.0) slowest = std::min(slowest, 2.0 * p.trap_rate / p.n_sites);
  const double t_cap = opt.horizon_factor / slowest;

  using State = std::vector<double>;
  // Layout: vectorized rho, the zeroth and first trapping moments, and the
  // decayed population 2 Gamma int Tr rho dt.
  State x(dim + 3, 0.0);
  Eigen::Map<Eigen::VectorXd>(x.data(), dim) = vectorize(rho0);

  auto rhs = [&](const State& y, State& dy, double t) {
    Eigen::Map<const Eigen::VectorXd> rho(y.data(), dim);
    Eigen::Map<Eigen::VectorXd>(dy.data(), dim).noalias() = s.l * rho;
    dy[dim] = two_kappa * y[nn];
    dy[dim + 1] = two_kappa * t * y[nn];
    double tr = 0.0;
    for (int j = 0; j < p.n_sites; ++j) tr += y[s.index(j, j)];
    dy[dim + 2] = 2.0 * p.decay_rate * tr;
  };
  auto trace_of = [&](const State& y) {
    double tr = 0.0;
    for (int j = 0; j < p.n_sites; ++j) tr += y[s.index(j, j)];
    return tr;
  };

  namespace odeint = boost::numeric::odeint;
  auto stepper = odeint::make_controlled(opt.abs_tol, opt.rel_tol,
                                         odeint::runge_kutta_dopri5<State>());
  double t = 0.0;
  const double scale = s.l.cwiseAbs().rowwise().sum().maxCoeff();
  double dt = 1e-3 / std::max(scale, 1.0);
  while (trace_of(x) >= opt.trace_floor) {
    if (t > t_cap) {
      if (trace_of(x) > opt.horizon_trace)
        throw HorizonExceeded("population " + std::to_string(trace_of(x)) +
                              " remains at t_cap = " + std::to_string(t_cap));
      break;
    }
    int rejected = 0;
    while (stepper.try_step(rhs, x, t, dt) == odeint::fail) {
      if (++rejected > 500) throw HorizonExceeded("step size control failed at t = " + std::to_string(t));
    }
  }

  TransportResult r;
  r.source = Source::brute_force;
  r.efficiency = x[dim];
  r.decay_loss = x[dim + 2];
  if (r.efficiency != 0.0) {
    r.transfer_time = x[dim + 1] / r.efficiency;
    r.rate = r.efficiency / *r.transfer_time;
  }
  return r;
}

}  // namespace enaqt::full
