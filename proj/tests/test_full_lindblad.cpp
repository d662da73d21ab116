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

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "enaqt/closed_form.hpp"
#include "enaqt/full_lindblad.hpp"
#include "enaqt/random.hpp"
#include "enaqt/reduced_dynamics.hpp"
#include "oracles.hpp"

namespace enaqt::full {
namespace {

NetworkParams random_params(Sampler& rng, int max_sites, double lo = 1e-2, double hi = 1e1) {
  NetworkParams p;
  p.n_sites = rng.integer(2, max_sites);
  p.coupling = 1.0;
  p.trap_rate = rng.log_uniform(lo, hi);
  p.decay_rate = rng.log_uniform(lo, hi);
  p.dephasing_rate = rng.log_uniform(lo, hi);
  return with_detuning(p, rng.uniform(-10.0, 10.0));
}

DensityMatrix random_hermitian(Sampler& rng, int n) {
  DensityMatrix a(n, n);
  for (int i = 0; i < a.size(); ++i) a(i) = {rng.normal(), rng.normal()};
  return 0.5 * (a + a.adjoint());
}

TEST(BuildSuperoperator, MatchesKroneckerAssembly) {
  Sampler rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkParams p = random_params(rng, 6);
    const Superoperator s = build_superoperator(p);
    const Eigen::MatrixXcd reference = oracle::kron_lindbladian(p);
    const DensityMatrix rho = random_hermitian(rng, p.n_sites);
    Eigen::VectorXcd vec_rho = rho.reshaped();
    const Eigen::VectorXcd want = reference * vec_rho;
    const DensityMatrix got = unvectorize(s.l * vectorize(rho), p.n_sites);
    EXPECT_LT((got.reshaped() - want).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + want.cwiseAbs().maxCoeff()));
  }
}

TEST(BuildSuperoperator, TwoLevelCoherentSeed) {
  NetworkParams p;
  p.n_sites = 2;
  p.coupling = 1.0;
  const Superoperator s = build_superoperator(p);
  const DensityMatrix d = unvectorize(s.l * vectorize(localized_density(2, 0)), 2);
  EXPECT_NEAR(d(0, 1).real(), 0.0, 1e-15);
  EXPECT_NEAR(d(0, 1).imag(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(d(0, 0)), 0.0, 1e-15);
}

TEST(BuildSuperoperator, DampingBookkeeping) {
  NetworkParams p;
  p.n_sites = 5;
  p.trap_rate = 3.0;
  p.decay_rate = 0.25;
  p.dephasing_rate = 7.0;
  EXPECT_EQ(damping(p, 4, 4), 2 * 0.25 + 2 * 3.0);
  EXPECT_EQ(damping(p, 1, 2), 7.0 + 0.5);
  EXPECT_EQ(damping(p, 2, 2), 0.5);
  EXPECT_EQ(damping(p, 1, 4), 7.0 + 0.5 + 3.0);
  const Superoperator s = build_superoperator(p);
  for (int j = 0; j < 5; ++j)
    for (int k = 0; k < 5; ++k) EXPECT_EQ(s.l(s.index(j, k), s.index(j, k)), -damping(p, j, k));
}

TEST(BuildSuperoperator, PreservesHermiticityAndTraceChannel) {
  Sampler rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const NetworkParams p = random_params(rng, 8);
    const Superoperator s = build_superoperator(p);
    const DensityMatrix rho = random_hermitian(rng, p.n_sites);
    const DensityMatrix d = unvectorize(s.l * vectorize(rho), p.n_sites);
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * (1.0 + d.cwiseAbs().maxCoeff()));
    const double want = -2 * p.decay_rate * rho.trace().real() -
                        2 * p.trap_rate * rho(p.n_sites - 1, p.n_sites - 1).real();
    EXPECT_NEAR(d.trace().real(), want, 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST(BuildSuperoperator, DimensionCap) {
  NetworkParams p;
  p.n_sites = 41;
  p.trap_rate = 1.0;
  EXPECT_THROW(build_superoperator(p), DimensionCap);
  p.n_sites = 6;
  EXPECT_THROW(build_superoperator(p, 5), DimensionCap);
  EXPECT_THROW(transport_full(p, localized_density(6, 0), 5), DimensionCap);
}

TEST(ReduceState, Examples) {
  const int n = 6;
  const DensityMatrix mixed = DensityMatrix::Identity(n, n) / double(n);
  EXPECT_LT((reduce_state(mixed).as_vector() - ReducedVector{1.0 / n, 1.0 / n, 0, 1, 1}.as_vector())
                .cwiseAbs()
                .maxCoeff(),
            1e-15);
  EXPECT_LT((reduce_state(superposition_density(n, 4)).as_vector() - ReducedVector{0, 0, 0, 4, 1}.as_vector())
                .cwiseAbs()
                .maxCoeff(),
            1e-14);
  EXPECT_EQ(reduce_state(localized_density(n, n - 1)).as_vector(), (ReducedVector{1, 1, 0, 1, 1}.as_vector()));
}

TEST(Evolve, InitialTimeAndLossFreeTrace) {
  Sampler rng(3);
  NetworkParams p = random_params(rng, 6);
  p.n_sites = 5;
  p.trap_rate = 0.0;
  p.decay_rate = 0.0;
  const DensityMatrix rho0 = rng.density_matrix(5);
  std::vector<double> times{0.0};
  for (int k = 1; k <= 10; ++k) times.push_back(0.4 * k);
  const auto out = evolve(p, rho0, times);
  EXPECT_EQ((out[0] - rho0).cwiseAbs().maxCoeff(), 0.0);
  for (const auto& rho : out) EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
}

TEST(Evolve, CommutesWithReduction) {
  Sampler rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    const NetworkParams p = random_params(rng, 7);
    const DensityMatrix rho0 = rng.density_matrix(p.n_sites);
    const std::vector<double> times{0.0, 0.3, 0.6, 0.9, 1.2, 2.5};
    const auto full = evolve(p, rho0, times);
    const auto red = reduced::trajectory(p, reduce_state(rho0), times);
    for (std::size_t i = 0; i < times.size(); ++i)
      EXPECT_LT((reduce_state(full[i]).as_vector() - red[i].as_vector()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Evolve, TwentySiteTrapPopulationMatchesReduced) {
  NetworkParams p;
  p.n_sites = 20;
  p.coupling = 1.0;
  p.trap_rate = 44.0;
  p.decay_rate = 0.01;
  p.dephasing_rate = 56.0;
  p = with_detuning(p, 100.0);
  std::vector<double> times;
  for (int k = 0; k <= 8; ++k) times.push_back(0.05 * k);
  const auto full = evolve(p, localized_density(20, 0), times);
  const auto red = reduced::trajectory(p, {0, 0, 0, 1, 1}, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    EXPECT_NEAR(full[i](19, 19).real(), red[i].rho_nn, 1e-9);
}

TEST(TransportFull, NoDecayTrapsEverything) {
  Sampler rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    NetworkParams p = random_params(rng, 7);
    p.decay_rate = 0.0;
    const auto r = transport_full(p, rng.density_matrix(p.n_sites));
    EXPECT_NEAR(r.efficiency, 1.0, 1e-10);
    EXPECT_EQ(r.source, Source::full);
  }
}

TEST(TransportFull, TwoSiteMatchesClosedForm) {
  Sampler rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    NetworkParams p = random_params(rng, 2);
    p.n_sites = 2;
    p = with_detuning(p, rng.uniform(-10.0, 10.0));
    const auto r = transport_full(p, localized_density(2, 0));
    const double want = closed_form::efficiency_from(closed_form::alpha_two_site(p), p);
    EXPECT_LT(oracle::rel_diff(r.efficiency, want), 1e-10);
  }
}

TEST(TransportFull, MatchesReducedForArbitraryStates) {
  Sampler rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const NetworkParams p = random_params(rng, 8, 1e-2, 1e2);
    const DensityMatrix rho0 = rng.density_matrix(p.n_sites);
    const auto f = transport_full(p, rho0);
    const auto r = reduced::transport(p, reduce_state(rho0));
    EXPECT_LT(oracle::rel_diff(f.efficiency, r.efficiency), 1e-8);
    EXPECT_LT(oracle::rel_diff(*f.transfer_time, *r.transfer_time), 1e-8);
    EXPECT_NEAR(f.efficiency + f.decay_loss, 1.0, 1e-10);
  }
}

TEST(TransportFull, AffineInInitialState) {
  Sampler rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const NetworkParams p = random_params(rng, 6);
    const DensityMatrix a = rng.density_matrix(p.n_sites);
    const DensityMatrix b = rng.density_matrix(p.n_sites);
    const double w = rng.uniform(0.0, 1.0);
    const DensityMatrix mix = w * a + (1.0 - w) * b;
    const double lhs = transport_full(p, mix).efficiency;
    const double rhs = w * transport_full(p, a).efficiency + (1.0 - w) * transport_full(p, b).efficiency;
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

TEST(TransportFull, NoAbsorptionIsSingular) {
  NetworkParams p;
  p.n_sites = 3;
  EXPECT_THROW(transport_full(p, localized_density(3, 0)), SingularGenerator);
}

TEST(BruteForce, MatchesResolvent) {
  Sampler rng(9);
  for (int trial = 0; trial < 6; ++trial) {
    NetworkParams p = random_params(rng, 5, 1e-1, 1e1);
    p.decay_rate = rng.log_uniform(5e-2, 1.0);
    const DensityMatrix rho0 = rng.density_matrix(p.n_sites);
    const auto b = brute_force_eta_tau(p, rho0);
    const auto f = transport_full(p, rho0);
    EXPECT_LT(oracle::rel_diff(b.efficiency, f.efficiency), 1e-6);
    EXPECT_LT(oracle::rel_diff(*b.transfer_time, *f.transfer_time), 1e-6);
    EXPECT_NEAR(b.efficiency + b.decay_loss, 1.0, 1e-8);
    EXPECT_EQ(b.source, Source::brute_force);
  }
}

TEST(BruteForce, NoTrapping) {
  NetworkParams p;
  p.n_sites = 3;
  p.coupling = 1.0;
  p.decay_rate = 0.5;
  p.dephasing_rate = 1.0;
  const auto b = brute_force_eta_tau(p, localized_density(3, 0));
  EXPECT_EQ(b.efficiency, 0.0);
  EXPECT_FALSE(b.transfer_time.has_value());
}

TEST(BruteForce, OverdampedAgreesWithClosedForm) {
  NetworkParams p;
  p.n_sites = 4;
  p.coupling = 1.0;
  p.trap_rate = 1.0;
  p.decay_rate = 100.0;
  p.dephasing_rate = 2.0;
  p = with_detuning(p, 1.0);
  const auto b = brute_force_eta_tau(p, localized_density(4, 0));
  const double want = closed_form::efficiency_cf(p, 1);
  EXPECT_LT(want, 1e-3);
  EXPECT_LT(oracle::rel_diff(b.efficiency, want), 1e-6);
}

TEST(BruteForce, CoherentTwoSiteRate) {
  NetworkParams p;
  p.n_sites = 2;
  p.coupling = 1.0;
  p.trap_rate = 2.0;
  p.decay_rate = 1e-8;
  p = with_detuning(p, 0.0);
  const auto b = brute_force_eta_tau(p, localized_density(2, 0));
  EXPECT_LT(oracle::rel_diff(b.rate, 2.0 / 3.0), 1e-6);
  EXPECT_LT(oracle::rel_diff(closed_form::coherent_rate(p, 1).rate, 2.0 / 3.0), 1e-15);
}

TEST(BruteForce, HorizonExceeded) {
  // Coherent dark states with only a whisper of decay outlive the horizon.
  NetworkParams p;
  p.n_sites = 4;
  p.coupling = 1.0;
  p.trap_rate = 1.0;
  p.decay_rate = 1e-7;
  p = with_detuning(p, 0.0);
  BruteForceOptions opt;
  opt.horizon_factor = 1e-5;
  EXPECT_THROW(brute_force_eta_tau(p, localized_density(4, 0), opt), HorizonExceeded);
}

}  // namespace
}  // namespace enaqt::full
