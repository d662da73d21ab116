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

// Box-constrained Nelder-Mead minimizer. Trial points are projected onto
// the box; evaluations returning NaN are treated as +infinity.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <type_traits>

namespace enaqt::opt {

template <std::size_t Dim>
using Point = std::array<double, Dim>;

template <std::size_t Dim>
struct Box {
  Point<Dim> lower{};
  Point<Dim> upper{};

  Point<Dim> clamp(Point<Dim> x) const {
    for (std::size_t i = 0; i < Dim; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    return x;
  }
};

struct NelderMeadOptions {
  double x_tol = 1e-6;       // stop when diameter < x_tol * max(1, |x_best|)
  int max_iterations = 10000;
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
};

template <std::size_t Dim>
struct NelderMeadResult {
  Point<Dim> x{};
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

template <std::size_t Dim>
double euclidean_norm(const Point<Dim>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

template <std::size_t Dim>
double distance(const Point<Dim>& a, const Point<Dim>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < Dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Minimizes `f` from `start`. The initial simplex offsets each coordinate
/// by `step[i]`, flipping direction when that would leave the box. Values
/// are compared in the objective's own floating type.
template <std::size_t Dim, typename F>
NelderMeadResult<Dim> nelder_mead(F&& f, const Point<Dim>& start, const Point<Dim>& step,
                                  const Box<Dim>& box, const NelderMeadOptions& opt = {}) {
  using Value = std::decay_t<std::invoke_result_t<F&, const Point<Dim>&>>;
  constexpr std::size_t kVertices = Dim + 1;
  NelderMeadResult<Dim> result;
  auto eval = [&](const Point<Dim>& x) -> Value {
    ++result.evaluations;
    const Value v = f(x);
    return std::isnan(v) ? std::numeric_limits<Value>::infinity() : v;
  };

  std::array<Point<Dim>, kVertices> simplex;
  std::array<Value, kVertices> values;
  simplex[0] = box.clamp(start);
  for (std::size_t i = 0; i < Dim; ++i) {
    Point<Dim> v = simplex[0];
    v[i] += step[i];
    if (v[i] > box.upper[i]) v[i] = simplex[0][i] - step[i];
    simplex[i + 1] = box.clamp(v);
  }
  for (std::size_t i = 0; i < kVertices; ++i) values[i] = eval(simplex[i]);

  std::array<std::size_t, kVertices> order;
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    auto s2 = simplex;
    auto v2 = values;
    for (std::size_t i = 0; i < kVertices; ++i) {
      simplex[i] = s2[order[i]];
      values[i] = v2[order[i]];
    }
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 0; i < kVertices; ++i)
      for (std::size_t j = i + 1; j < kVertices; ++j) d = std::max(d, distance(simplex[i], simplex[j]));
    return d;
  };
  auto along = [&](const Point<Dim>& centroid, const Point<Dim>& worst, double coef) {
    Point<Dim> x;
    for (std::size_t i = 0; i < Dim; ++i) x[i] = centroid[i] + coef * (centroid[i] - worst[i]);
    return box.clamp(x);
  };

  sort_simplex();
  while (true) {
    if (diameter() < opt.x_tol * std::max(1.0, euclidean_norm(simplex[0]))) {
      result.converged = true;
      break;
    }
    if (result.iterations >= opt.max_iterations) break;
    ++result.iterations;

    Point<Dim> centroid{};
    for (std::size_t v = 0; v < Dim; ++v)
      for (std::size_t i = 0; i < Dim; ++i) centroid[i] += simplex[v][i] / Dim;
    const Point<Dim>& worst = simplex[Dim];

    const Point<Dim> reflected = along(centroid, worst, opt.reflection);
    const Value f_r = eval(reflected);
    if (f_r < values[0]) {
      const Point<Dim> expanded = along(centroid, worst, opt.reflection * opt.expansion);
      const Value f_e = eval(expanded);
      if (f_e < f_r) {
        simplex[Dim] = expanded;
        values[Dim] = f_e;
      } else {
        simplex[Dim] = reflected;
        values[Dim] = f_r;
      }
    } else if (f_r < values[Dim - 1]) {
      simplex[Dim] = reflected;
      values[Dim] = f_r;
    } else {
      const bool outside = f_r < values[Dim];
      const Point<Dim> contracted =
          outside ? along(centroid, worst, opt.reflection * opt.contraction)
                  : along(centroid, worst, -opt.contraction);
      const Value f_c = eval(contracted);
      if (f_c < (outside ? f_r : values[Dim])) {
        simplex[Dim] = contracted;
        values[Dim] = f_c;
      } else {
        for (std::size_t v = 1; v < kVertices; ++v) {
          for (std::size_t i = 0; i < Dim; ++i)
            simplex[v][i] = simplex[0][i] + opt.shrink * (simplex[v][i] - simplex[0][i]);
          simplex[v] = box.clamp(simplex[v]);
          values[v] = eval(simplex[v]);
        }
      }
    }
    sort_simplex();
  }
  result.x = simplex[0];
  result.value = static_cast<double>(values[0]);
  return result;
}

}  // namespace enaqt::opt
