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
#include "enaqt/random.hpp"
#include "enaqt/reduced_dynamics.hpp"
#include "oracles.hpp"

namespace enaqt::closed_form {
namespace {

NetworkParams make(int n, double delta, double kappa, double gamma, double lambda, double j = 1.0) {
  NetworkParams p;
  p.n_sites = n;
  p.coupling = j;
  p.trap_rate = kappa;
  p.decay_rate = gamma;
  p.dephasing_rate = lambda;
  return with_detuning(p, delta);
}

NetworkParams random_params(Sampler& rng) {
  return make(rng.integer(2, 50), rng.uniform(-1e3, 1e3), rng.log_uniform(1e-3, 1e3),
              rng.log_uniform(1e-3, 1e3), rng.log_uniform(1e-3, 1e3), rng.log_uniform(0.1, 10.0));
}

TEST(AlphaCoeffs, NoDephasingFormAgrees) {
  Sampler rng(1);
  for (int i = 0; i < 300; ++i) {
    NetworkParams p = random_params(rng);
    p.dephasing_rate = 0.0;
    const int s = rng.integer(1, p.n_sites - 1);
    const auto general = alpha_coeffs(p, s);
    const auto limit = alpha_no_dephasing(p, s);
    EXPECT_LT(oracle::rel_diff(general.alpha1, limit.alpha1), 1e-12);
    EXPECT_LT(oracle::rel_diff(general.alpha2, limit.alpha2), 1e-12);
  }
}

TEST(AlphaCoeffs, NoDecayGivesUnitEfficiency) {
  Sampler rng(2);
  for (int i = 0; i < 300; ++i) {
    NetworkParams p = random_params(rng);
    p.decay_rate = 0.0;
    const int s = rng.integer(1, p.n_sites - 1);
    const auto c = alpha_coeffs(p, s);
    EXPECT_NEAR(c.alpha1, alpha_no_decay().alpha1, 1e-14);
    EXPECT_EQ(c.alpha2, alpha_no_decay().alpha2);
    EXPECT_NEAR(efficiency_cf(p, s), 1.0, 1e-14);
  }
}

TEST(AlphaCoeffs, TwoSiteFormAgrees) {
  Sampler rng(3);
  for (int i = 0; i < 300; ++i) {
    NetworkParams p = random_params(rng);
    p.n_sites = 2;
    const auto general = alpha_coeffs(p, 1);
    const auto limit = alpha_two_site(p);
    EXPECT_LT(oracle::rel_diff(general.alpha1, limit.alpha1), 1e-12);
    EXPECT_LT(oracle::rel_diff(general.alpha2, limit.alpha2), 1e-12);
  }
}

TEST(AlphaCoeffs, SignInvariants) {
  Sampler rng(4);
  for (int i = 0; i < 500; ++i) {
    const NetworkParams p = random_params(rng);
    EXPECT_GE(alpha_coeffs(p, 1).alpha1, 1.0);
    EXPECT_GE(alpha_coeffs(p, rng.integer(1, p.n_sites - 1)).alpha2, 0.0);
  }
}

TEST(AlphaCoeffs, DegenerateDenominators) {
  EXPECT_THROW(alpha_coeffs(make(5, 0, 1, 0, 0), 1), DegenerateDenominator);
  EXPECT_THROW(alpha_coeffs(make(5, 0, 0, 1, 1), 1), DegenerateDenominator);
  EXPECT_THROW(beta_coeffs(make(5, 0, 1, 0, 0), 1), DegenerateDenominator);
  EXPECT_THROW(beta_no_decay(make(5, 0, 1, 0, 0), 1), DegenerateDenominator);
}

TEST(EfficiencyCf, ReferenceValues) {
  EXPECT_NEAR(efficiency_cf(make(20, 100, 44, 0.01, 56), 1), 0.33, 0.005);
  EXPECT_NEAR(efficiency_cf(make(20, 0, 4.5, 0.01, 6), 1), 0.83, 0.005);
}

TEST(EfficiencyCf, CoherentLimit) {
  const NetworkParams p = make(20, 0, 1, 1e-8, 0);
  EXPECT_LT(oracle::rel_diff(efficiency_cf(p, 1), 1.0 / 19.0), 1e-6);
  for (int s : {1, 5, 12, 19})
    EXPECT_LT(oracle::rel_diff(efficiency_cf(p, s), efficiency_coherent_limit(20, s)), 1e-6);
  // Order of limits: switching dephasing on before decay off gives unity.
  EXPECT_NEAR(efficiency_cf(make(20, 0, 1, 0, 1e-3), 1), 1.0, 1e-14);
}

TEST(EfficiencyCf, DecreasesWithDetuning) {
  Sampler rng(5);
  for (int i = 0; i < 200; ++i) {
    const NetworkParams p = random_params(rng);
    const int s = rng.integer(1, p.n_sites - 1);
    double previous = efficiency_cf(with_detuning(p, 0.0), s);
    for (double delta : {0.5, 2.0, 10.0, 50.0, 300.0}) {
      const double eta = efficiency_cf(with_detuning(p, delta), s);
      EXPECT_LT(eta, previous);
      EXPECT_GT(eta, 0.0);
      EXPECT_LE(eta, 1.0);
      previous = eta;
    }
  }
}

TEST(BetaCoeffs, LimitFormsAgree) {
  Sampler rng(6);
  for (int i = 0; i < 300; ++i) {
    NetworkParams p = random_params(rng);
    const int s = rng.integer(1, p.n_sites - 1);
    NetworkParams q = p;
    q.decay_rate = 0.0;
    auto general = beta_coeffs(q, s);
    auto limit = beta_no_decay(q, s);
    EXPECT_LT(oracle::rel_diff(general.beta1, limit.beta1), 1e-12);
    EXPECT_LT(oracle::rel_diff(general.beta2, limit.beta2), 1e-12);
    q = p;
    q.dephasing_rate = 0.0;
    general = beta_coeffs(q, s);
    limit = beta_no_dephasing(q, s);
    EXPECT_LT(oracle::rel_diff(general.beta1, limit.beta1), 1e-12);
    EXPECT_LT(oracle::rel_diff(general.beta2, limit.beta2), 1e-12);
    EXPECT_GT(beta_coeffs(p, s).beta1, 0.0);
    EXPECT_GE(beta_coeffs(p, s).beta2, 0.0);
  }
}

TEST(RateCf, NoTrappingMeansNoRate) { EXPECT_EQ(rate_cf(make(6, 3, 0, 0.1, 1), 2), 0.0); }

TEST(RateCf, ThreeSiteNoDecayPathsAgree) {
  Sampler rng(7);
  for (int i = 0; i < 100; ++i) {
    NetworkParams p = make(3, rng.uniform(-30, 30), rng.log_uniform(1e-2, 1e2), 0.0, rng.log_uniform(1e-2, 1e2));
    EXPECT_LT(oracle::rel_diff(rate_cf(p, 1), rate_from(beta_no_decay(p, 1), p)), 1e-12);
  }
}

TEST(RateCf, TransferTimeIsEfficiencyOverRate) {
  const NetworkParams p = make(20, 100, 44, 0.01, 56);
  EXPECT_DOUBLE_EQ(transfer_time_cf(p, 1), efficiency_cf(p, 1) / rate_cf(p, 1));
  const auto r = transport_cf(p, 1);
  EXPECT_EQ(r.source, Source::closed_form);
  EXPECT_NEAR(r.efficiency + r.decay_loss, 1.0, 1e-15);
}

TEST(ClosedForm, ExactAgainstReducedSolver) {
  Sampler rng(8);
  for (int i = 0; i < 300; ++i) {
    const NetworkParams p = random_params(rng);
    const int s = rng.integer(1, p.n_sites - 1);
    const auto r = reduced::transport(p, {0, 0, 0, static_cast<double>(s), 1});
    EXPECT_LT(oracle::rel_diff(efficiency_cf(p, s), r.efficiency), 1e-10);
    EXPECT_LT(oracle::rel_diff(rate_cf(p, s), r.rate), 1e-10);
  }
}

TEST(ClosedForm, ExtendedPrecisionAgreesWithDouble) {
  Sampler rng(9);
  for (int i = 0; i < 200; ++i) {
    const NetworkParams p = random_params(rng);
    const int s = rng.integer(1, p.n_sites - 1);
    EXPECT_LT(oracle::rel_diff(static_cast<double>(rate_cf<long double>(p, s)), rate_cf(p, s)), 1e-13);
    EXPECT_LT(oracle::rel_diff(static_cast<double>(efficiency_cf<long double>(p, s)), efficiency_cf(p, s)), 1e-13);
  }
}

TEST(CoherentRate, FullySymmetricSuperposition) {
  const auto c = coherent_rate(make(20, 0, 1, 0, 0), 19);
  const double want = 19.0 / std::sqrt(38.0);
  EXPECT_NEAR(c.rate_max, want, 1e-12);
  EXPECT_NEAR(c.rate_max, 3.082, 1e-3);
  EXPECT_NEAR(coherent_rate(make(20, 0, c.kappa_star, 0, 0), 19).rate, c.rate_max, 1e-12);
}

TEST(CoherentRate, VanishesAtLargeDetuning) {
  double previous = INFINITY;
  for (double delta : {1e1, 1e2, 1e3, 1e4, 1e5}) {
    const auto c = coherent_rate(make(10, delta, 1, 0, 0), 3);
    EXPECT_LT(c.rate_max, previous);
    EXPECT_LT(oracle::rel_diff(c.rate_max, 3.0 / delta), 50.0 / (delta * delta));
    previous = c.rate_max;
  }
}

TEST(CoherentRate, TwoSiteStationaryPoint) {
  const auto c = coherent_rate(make(2, 0, 1, 0, 0), 1);
  EXPECT_NEAR(c.kappa_star, std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(c.rate_max, 1.0 / std::sqrt(2.0), 1e-15);
  for (double f : {0.5, 0.9, 0.99, 1.01, 1.1, 2.0})
    EXPECT_LT(coherent_rate(make(2, 0, f * c.kappa_star, 0, 0), 1).rate, c.rate_max);
}

TEST(CoherentRate, IsTheNoDephasingRateWithoutDecay) {
  const NetworkParams p = make(2, 0, 2, 0, 0);
  EXPECT_NEAR(coherent_rate(p, 1).rate, 2.0 / 3.0, 1e-15);
  NetworkParams q = p;
  q.decay_rate = 1e-12;
  EXPECT_LT(oracle::rel_diff(rate_from(beta_no_dephasing(q, 1), q), 2.0 / 3.0), 1e-10);
}

TEST(WeakDecay, Identities) {
  EXPECT_EQ(weak_decay_efficiency(make(20, 100, 44, 0.0, 56), 1), 1.0);
  NetworkParams p = make(20, 100, 44, 0.0, 56);
  const double r0 = rate_cf(p, 1);
  p.decay_rate = r0 / 2;
  EXPECT_NEAR(weak_decay_efficiency(p, 1), 0.5, 1e-15);
}

TEST(WeakDecay, CloseToExactAtDetunedOptimum) {
  const NetworkParams p = make(20, 100, 44, 0.01, 56);
  EXPECT_NEAR(weak_decay_efficiency(p, 1), efficiency_cf(p, 1), 0.01);
}

TEST(WeakDecay, ErrorVanishesAtLeastLinearly) {
  for (int s : {1, 4}) {
    std::vector<double> lg, le;
    for (double g : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const NetworkParams p = make(12, 10, 3, g, 5);
      lg.push_back(std::log(g));
      le.push_back(std::log(std::abs(efficiency_cf(p, s) - weak_decay_efficiency(p, s))));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lg.size(); ++i) mx += lg[i] / lg.size(), my += le[i] / le.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lg.size(); ++i) sxy += (lg[i] - mx) * (le[i] - my), sxx += (lg[i] - mx) * (lg[i] - mx);
    EXPECT_GE(sxy / sxx, 0.9) << "s = " << s;
  }
}

TEST(CoherentEfficiencyMax, Values) {
  EXPECT_NEAR(coherent_efficiency_max(20, 1, 0, 0.01), 1.0 / (1.0 + 0.02 * std::sqrt(38.0) / 19.0), 1e-15);
  EXPECT_NEAR(coherent_efficiency_max(20, 1, 0, 0.01), 0.9935, 1e-4);
  EXPECT_EQ(coherent_efficiency_max(20, 1, 0, 0.0), 1.0);
  EXPECT_NEAR(efficiency_cf(make(20, 100, 100, 0.01, 0), 19), 0.9, 0.01);
  EXPECT_NEAR(coherent_efficiency_max(20, 1, 100, 0.01), 0.9, 0.01);
}

TEST(EnaqtOptimum, LargeDetuning) {
  const auto o = enaqt_optimum(20, 1, 100);
  EXPECT_NEAR(o.c_ratio, 1.34164, 1e-5);
  EXPECT_NEAR(o.kappa_opt, 42.9, 0.05);
  EXPECT_NEAR(o.lambda_opt, 57.6, 0.05);
  EXPECT_EQ(o.lambda_opt, o.c_ratio * o.kappa_opt);
  EXPECT_EQ(o.c_ratio, std::sqrt(2.0 * 18.0 / 20.0));
}

TEST(EnaqtOptimum, ZeroDetuning) {
  const auto o = enaqt_optimum(20, 1, 0);
  EXPECT_NEAR(o.kappa_opt, std::sqrt(20.0), 1e-14);
  EXPECT_NEAR(o.kappa_opt, 4.5, 0.05);
  EXPECT_NEAR(o.lambda_opt, 6.0, 0.01);
  const double c = std::sqrt(1.8);
  EXPECT_NEAR(o.rate_opt, 1.0 / std::sqrt((1 + c) * (1 + c) * 20.0), 1e-15);
  EXPECT_NEAR(o.rate_opt, 0.0955, 1e-4);
}

TEST(Stationarity, VanishesAtOptimum) {
  for (int n : {3, 10, 20, 50})
    for (double delta : {0.0, 10.0, 100.0}) {
      const auto o = enaqt_optimum(n, 1, delta);
      const auto [rk, rl] = stationarity_residuals(n, 1, delta, o.kappa_opt, o.lambda_opt);
      EXPECT_NEAR(rk, 0.0, 1e-12);
      EXPECT_NEAR(rl, 0.0, 1e-12);
    }
}

TEST(Stationarity, OneSidedRoots) {
  const double k = kappa_root_small_dephasing(20, 1, 30);
  EXPECT_NEAR(k, std::sqrt(920.0), 1e-12);
  EXPECT_NEAR(stationarity_residuals(20, 1, 30, k, 1e-12).first, 0.0, 1e-9);
  const double l = lambda_root_small_trapping(20, 1, 30);
  EXPECT_NEAR(l, std::sqrt(936.0), 1e-12);
  EXPECT_NEAR(stationarity_residuals(20, 1, 30, 1e-12, l).second, 0.0, 1e-9);
}

TEST(Stationarity, FiniteDifferenceGradientVanishes) {
  for (int n : {3, 20, 50})
    for (double delta : {0.0, 25.0, 100.0}) {
      const auto o = enaqt_optimum(n, 1, delta);
      auto r0 = [&](double kappa, double lambda) { return rate_cf(make(n, delta, kappa, 0, lambda), 1); };
      const double hk = 1e-6 * o.kappa_opt;
      const double hl = 1e-6 * o.lambda_opt;
      const double dk = (r0(o.kappa_opt + hk, o.lambda_opt) - r0(o.kappa_opt - hk, o.lambda_opt)) / (2 * hk);
      const double dl = (r0(o.kappa_opt, o.lambda_opt + hl) - r0(o.kappa_opt, o.lambda_opt - hl)) / (2 * hl);
      const double scale = o.rate_opt / o.kappa_opt;
      EXPECT_LT(std::abs(dk) / scale, 1e-6) << n << " " << delta;
      EXPECT_LT(std::abs(dl) / scale, 1e-6) << n << " " << delta;
      EXPECT_LT(oracle::rel_diff(r0(o.kappa_opt, o.lambda_opt), o.rate_opt), 1e-12);
    }
}

}  // namespace
}  // namespace enaqt::closed_form
