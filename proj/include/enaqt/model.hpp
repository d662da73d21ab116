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

// Physical parameters and initial conditions for transport on the fully
// connected network, and the map from a density matrix onto the five
// aggregate variables that close the dynamics.

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "enaqt/error.hpp"

namespace enaqt {

using DensityMatrix = Eigen::MatrixXcd;

/// One network instance. All energies and rates share one unit (hbar = 1).
struct NetworkParams {
  int n_sites = 2;
  double coupling = 1.0;        // J
  double trap_energy = 0.0;     // site energy of the trap, epsilon_N
  double trap_rate = 0.0;       // kappa
  double decay_rate = 0.0;      // Gamma
  double dephasing_rate = 0.0;  // lambda
};

/// Detuning of the trap level from the symmetric manifold,
/// epsilon_N - J (N - 2).
inline double detuning(const NetworkParams& p) {
  return p.trap_energy - p.coupling * static_cast<double>(p.n_sites - 2);
}

/// Inverse of detuning(): the trap energy that produces `delta`.
inline double trap_energy_for_detuning(int n_sites, double coupling, double delta) {
  return delta + coupling * static_cast<double>(n_sites - 2);
}

inline NetworkParams with_detuning(NetworkParams p, double delta) {
  p.trap_energy = trap_energy_for_detuning(p.n_sites, p.coupling, delta);
  return p;
}

/// Equal-weight pure superposition over the first `s` non-trap sites.
struct SymmetricSuperposition {
  int s = 1;
};

using InitialCondition = std::variant<SymmetricSuperposition, DensityMatrix>;

/// (rho_NN, Re A_N, Im A_N, sum of all rho_jk, Tr rho), A_N = sum_j rho_jN.
struct ReducedVector {
  double rho_nn = 0.0;
  double x = 0.0;
  double y = 0.0;
  double sigma = 0.0;
  double t = 0.0;

  using Storage = Eigen::Matrix<double, 5, 1>;

  Storage as_vector() const {
    Storage v;
    v << rho_nn, x, y, sigma, t;
    return v;
  }

  static ReducedVector from_vector(const Storage& v) {
    return {v(0), v(1), v(2), v(3), v(4)};
  }
};

enum class Source { full, reduced, closed_form, brute_force };

inline std::string_view to_string(Source s) {
  switch (s) {
    case Source::full: return "full";
    case Source::reduced: return "reduced";
    case Source::closed_form: return "closed_form";
    case Source::brute_force: return "brute_force";
  }
  return "unknown";
}

struct TransportResult {
  double efficiency = 0.0;
  std::optional<double> transfer_time;  // empty when nothing is trapped
  double rate = 0.0;
  double decay_loss = 0.0;
  Source source = Source::reduced;
};

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigenFloor = -1e-10;

inline std::vector<std::string> validate_params(const NetworkParams& p) {
  std::vector<std::string> out;
  if (p.n_sites < 2) out.emplace_back("n_sites must satisfy N >= 2");
  if (!(std::isfinite(p.coupling) && p.coupling > 0.0))
    out.emplace_back("coupling J must be finite and > 0");
  if (!(std::isfinite(p.trap_rate) && p.trap_rate >= 0.0))
    out.emplace_back("trap_rate kappa must be finite and >= 0");
  if (!(std::isfinite(p.decay_rate) && p.decay_rate >= 0.0))
    out.emplace_back("decay_rate Gamma must be finite and >= 0");
  if (!(std::isfinite(p.dephasing_rate) && p.dephasing_rate >= 0.0))
    out.emplace_back("dephasing_rate lambda must be finite and >= 0");
  if (!std::isfinite(p.trap_energy)) out.emplace_back("trap_energy epsilon_N must be finite");
  if (p.trap_rate == 0.0 && p.decay_rate == 0.0)
    out.emplace_back("no absorption: eta undefined (kappa = Gamma = 0)");
  return out;
}

inline std::vector<std::string> validate_density_matrix(const DensityMatrix& rho, int n_sites) {
  std::vector<std::string> out;
  if (rho.rows() != n_sites || rho.cols() != n_sites) {
    out.emplace_back("density matrix must be N x N");
    return out;
  }
  if (!rho.allFinite()) {
    out.emplace_back("density matrix entries must be finite");
    return out;
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    out.emplace_back("density matrix must be Hermitian");
  if (std::abs(rho.trace() - std::complex<double>(1.0, 0.0)) > kTraceTol)
    out.emplace_back("density matrix must have unit trace");
  const DensityMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<DensityMatrix> eig(herm, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < kEigenFloor)
    out.emplace_back("density matrix must be positive semidefinite");
  return out;
}

/// Every violated invariant; an empty list means the inputs are usable.
inline std::vector<std::string> validate(const NetworkParams& p, const InitialCondition& init) {
  auto out = validate_params(p);
  if (const auto* sup = std::get_if<SymmetricSuperposition>(&init)) {
    if (sup->s < 1 || sup->s > p.n_sites - 1)
      out.emplace_back("s must satisfy 1 <= s <= N-1");
  } else if (p.n_sites >= 1) {
    auto dm = validate_density_matrix(std::get<DensityMatrix>(init), p.n_sites);
    out.insert(out.end(), dm.begin(), dm.end());
  }
  return out;
}

inline std::string join_violations(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& m : v) {
    if (!s.empty()) s += "; ";
    s += m;
  }
  return s;
}

/// Projector onto (1/sqrt(s)) sum_{j<s} |j>.
inline DensityMatrix superposition_density(int n_sites, int s) {
  DensityMatrix rho = DensityMatrix::Zero(n_sites, n_sites);
  rho.topLeftCorner(s, s).setConstant(1.0 / s);
  return rho;
}

/// |site><site| with a zero-based site index; the trap is n_sites - 1.
inline DensityMatrix localized_density(int n_sites, int site) {
  DensityMatrix rho = DensityMatrix::Zero(n_sites, n_sites);
  rho(site, site) = 1.0;
  return rho;
}

/// Aggregates of a density matrix; no validation.
inline ReducedVector reduce_density(const DensityMatrix& rho) {
  const Eigen::Index n = rho.rows();
  const std::complex<double> a_n = rho.col(n - 1).sum();
  return {rho(n - 1, n - 1).real(), a_n.real(), a_n.imag(), rho.sum().real(), rho.trace().real()};
}

inline ReducedVector reduced_initial_vector(const InitialCondition& init, int n_sites) {
  if (const auto* sup = std::get_if<SymmetricSuperposition>(&init)) {
    if (sup->s < 1 || sup->s > n_sites - 1)
      throw InvalidInput("s must satisfy 1 <= s <= N-1");
    return {0.0, 0.0, 0.0, static_cast<double>(sup->s), 1.0};
  }
  const auto& rho = std::get<DensityMatrix>(init);
  if (auto v = validate_density_matrix(rho, n_sites); !v.empty())
    throw InvalidInput(join_violations(v));
  return reduce_density(rho);
}

}  // namespace enaqt
