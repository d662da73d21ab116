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

// Dense kernels shared by the reduced and full solvers: an LU solve with
// extended-precision iterative refinement, and a scaling-and-squaring
// Pade matrix exponential.

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "enaqt/error.hpp"

namespace enaqt::linalg {

/// Reciprocal condition estimates below this are treated as singular.
inline constexpr double kSingularRcond = 1e-14;

/// Partial-pivoting LU of a square real matrix. Each solve is followed by
/// refinement sweeps whose residual b - A x is accumulated in long double,
/// which recovers full double accuracy for moderately ill-conditioned A.
template <typename Matrix>
class RefinedLU {
 public:
  using Vector = Eigen::Matrix<double, Matrix::RowsAtCompileTime, 1>;

  explicit RefinedLU(const Matrix& a, int refinement_steps = 1)
      : a_(a), lu_(a), steps_(refinement_steps) {
    rcond_ = lu_.rcond();
    if (!(rcond_ >= kSingularRcond))
      throw SingularGenerator("generator is singular (rcond = " + std::to_string(rcond_) + ")");
  }

  double rcond() const { return rcond_; }

  Vector solve(const Vector& b) const {
    Vector x = lu_.solve(b);
    for (int k = 0; k < steps_; ++k) x += lu_.solve(residual(b, x));
    return x;
  }

 private:
  Vector residual(const Vector& b, const Vector& x) const {
    Vector r(b.size());
    for (Eigen::Index i = 0; i < a_.rows(); ++i) {
      long double acc = b(i);
      for (Eigen::Index j = 0; j < a_.cols(); ++j)
        acc -= static_cast<long double>(a_(i, j)) * static_cast<long double>(x(j));
      r(i) = static_cast<double>(acc);
    }
    return r;
  }

  Matrix a_;
  Eigen::PartialPivLU<Matrix> lu_;
  int steps_;
  double rcond_ = 0.0;
};

namespace detail {

template <typename Plain>
Plain pade_odd_even_solve(const Plain& u, const Plain& v) {
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// exp(A) by the Higham (2005) scaling-and-squaring algorithm with
/// degree 3/5/7/9/13 Pade approximants.
template <typename Derived>
typename Derived::PlainObject expm(const Eigen::MatrixBase<Derived>& a_in) {
  using Plain = typename Derived::PlainObject;
  const Eigen::Index n = a_in.rows();
  Plain a = a_in;
  const Plain ident = Plain::Identity(n, n);
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();

  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                               25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                                302702400.0,   30270240.0,   2162160.0,
                                                110880.0,      3960.0,       90.0,
                                                1.0};
  static constexpr std::array<double, 14> b13 = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};

  auto low_degree = [&](const auto& b) -> Plain {
    const int m = static_cast<int>(b.size()) - 1;
    const Plain a2 = a * a;
    Plain pow = ident;
    Plain u_inner = b[1] * ident;
    Plain v = b[0] * ident;
    for (int k = 2; k <= m; k += 2) {
      pow = pow * a2;
      v += b[k] * pow;
      if (k + 1 <= m) u_inner += b[k + 1] * pow;
    }
    return detail::pade_odd_even_solve<Plain>(a * u_inner, v);
  };

  if (norm <= 1.495585217958292e-2) return low_degree(b3);
  if (norm <= 2.539398330063230e-1) return low_degree(b5);
  if (norm <= 9.504178996162932e-1) return low_degree(b7);
  if (norm <= 2.097847961257068e0) return low_degree(b9);

  constexpr double theta13 = 5.371920351148152e0;
  int squarings = 0;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    a /= std::ldexp(1.0, squarings);
  }
  const Plain a2 = a * a;
  const Plain a4 = a2 * a2;
  const Plain a6 = a4 * a2;
  const Plain u = a * (a6 * (b13[13] * a6 + b13[11] * a4 + b13[9] * a2) + b13[7] * a6 +
                       b13[5] * a4 + b13[3] * a2 + b13[1] * ident);
  const Plain v = a6 * (b13[12] * a6 + b13[10] * a4 + b13[8] * a2) + b13[6] * a6 +
                  b13[4] * a4 + b13[2] * a2 + b13[0] * ident;
  Plain r = detail::pade_odd_even_solve<Plain>(u, v);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

}  // namespace enaqt::linalg
