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

// Seeded draws of network parameters and density matrices for the
// randomized cross-checks.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "enaqt/model.hpp"

namespace enaqt {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Inclusive on both ends.
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  /// Random-rank mixed state G G^dagger / Tr, G complex Gaussian N x r.
  DensityMatrix density_matrix(int n_sites) {
    const int rank = integer(1, n_sites);
    Eigen::MatrixXcd g(n_sites, rank);
    for (int c = 0; c < rank; ++c)
      for (int r = 0; r < n_sites; ++r) g(r, c) = {normal(), normal()};
    DensityMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return 0.5 * (rho + rho.adjoint());
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace enaqt
