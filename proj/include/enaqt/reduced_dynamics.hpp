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

// The exact five-variable reduction of the network dynamics. The
// aggregates (rho_NN, X, Y, Sigma, T) obey a closed linear system
// dv/dt = M v, so efficiency and transfer time follow from two solves
// against M and trajectories from exp(M t).

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "enaqt/linalg.hpp"
#include "enaqt/model.hpp"

namespace enaqt::reduced {

using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

/// Generator in (rho_NN, X, Y, Sigma, T) order.
struct ReducedGenerator {
  Matrix5 m = Matrix5::Zero();
};

inline ReducedGenerator build_generator(const NetworkParams& p) {
  const double j = p.coupling;
  const double n = static_cast<double>(p.n_sites);
  const double eps = p.trap_energy;
  const double kappa = p.trap_rate;
  const double gamma = p.decay_rate;
  const double lambda = p.dephasing_rate;
  const double coherence_damping = -(lambda + 2.0 * gamma + kappa);
  const double shift = j * n - eps;

  ReducedGenerator g;
  auto& m = g.m;
  m(0, 0) = -2.0 * (gamma + kappa);
  m(0, 2) = 2.0 * j;
  m(1, 0) = -(kappa - lambda);
  m(1, 1) = coherence_damping;
  m(1, 2) = shift;
  m(2, 0) = -eps;
  m(2, 1) = -shift;
  m(2, 2) = coherence_damping;
  m(2, 3) = j;
  m(3, 1) = -2.0 * kappa;
  m(3, 2) = -2.0 * eps;
  m(3, 3) = -(lambda + 2.0 * gamma);
  m(3, 4) = lambda;
  m(4, 0) = -2.0 * kappa;
  m(4, 4) = -2.0 * gamma;
  return g;
}

/// Efficiency, mean transfer time and rate from the resolvent of M:
/// eta = -2 kappa [M^-1 v0]_1 and tau = (2 kappa / eta) [M^-2 v0]_1.
inline TransportResult transport(const NetworkParams& p, const ReducedVector& v0) {
  if (p.trap_rate == 0.0 && p.decay_rate == 0.0)
    throw SingularGenerator("no absorption: kappa = Gamma = 0");
  const ReducedGenerator g = build_generator(p);
  const linalg::RefinedLU<Matrix5> lu(g.m);
  const Vector5 w = lu.solve(v0.as_vector());
  const Vector5 u = lu.solve(w);

  TransportResult r;
  r.source = Source::reduced;
  const double kappa = p.trap_rate;
  r.efficiency = -2.0 * kappa * w(0);
  r.decay_loss = -2.0 * p.decay_rate * w(4);
  if (r.efficiency != 0.0) {
    r.transfer_time = 2.0 * kappa * u(0) / r.efficiency;
    r.rate = r.efficiency / *r.transfer_time;
  }
  return r;
}

/// v(t_k) = exp(M t_k) v0 for each requested time.
inline std::vector<ReducedVector> trajectory(const NetworkParams& p, const ReducedVector& v0,
                                             std::span<const double> times) {
  if (!times.empty() && times.front() < 0.0)
    throw InvalidInput("trajectory times must start at t >= 0");
  const Matrix5 m = build_generator(p).m;
  const Vector5 start = v0.as_vector();
  std::vector<ReducedVector> out;
  out.reserve(times.size());
  double previous = times.empty() ? 0.0 : times.front();
  for (double t : times) {
    if (t < previous) throw InvalidInput("trajectory times must be ascending");
    previous = t;
    if (t == 0.0) {
      out.push_back(v0);
      continue;
    }
    const Matrix5 prop = linalg::expm(Matrix5(m * t));
    out.push_back(ReducedVector::from_vector(prop * start));
  }
  return out;
}

/// Probability trapped and decayed on [0, t]; the generator is bordered
/// with two accumulator rows, d(acc_trap)/dt = 2 kappa rho_NN and
/// d(acc_decay)/dt = 2 Gamma T.
struct Accumulated {
  ReducedVector state;
  double trapped = 0.0;
  double decayed = 0.0;
};

inline Accumulated accumulate(const NetworkParams& p, const ReducedVector& v0, double t_max) {
  if (t_max < 0.0) throw InvalidInput("accumulation horizon must be >= 0");
  if (t_max == 0.0) return {v0, 0.0, 0.0};
  using Matrix7 = Eigen::Matrix<double, 7, 7>;
  using Vector7 = Eigen::Matrix<double, 7, 1>;
  Matrix7 aug = Matrix7::Zero();
  aug.topLeftCorner<5, 5>() = build_generator(p).m;
  aug(5, 0) = 2.0 * p.trap_rate;
  aug(6, 4) = 2.0 * p.decay_rate;
  Vector7 start = Vector7::Zero();
  start.head<5>() = v0.as_vector();
  const Vector7 end = linalg::expm(Matrix7(aug * t_max)) * start;
  return {ReducedVector::from_vector(end.head<5>()), end(5), end(6)};
}

/// 2 kappa * integral of rho_NN over [0, t_max].
inline double accumulated_eta(const NetworkParams& p, const ReducedVector& v0, double t_max) {
  if (t_max <= 0.0) return 0.0;
  return accumulate(p, v0, t_max).trapped;
}

}  // namespace enaqt::reduced
