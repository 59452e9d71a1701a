// Copyright 2026 The ultrawalk Authors
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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ultrawalk/errors.hpp"

namespace ultrawalk {

namespace detail {

inline void check_grid(double horizon, std::size_t steps) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ValidationError("averaging horizon T must be positive and finite");
  }
  if (steps < 1) throw ValidationError("quadrature needs at least one step");
}

}  // namespace detail

/// (1/T) * integral_0^T f(s) ds by the composite trapezoid rule on a
/// uniform grid of `steps` intervals.
template <class F>
double trapezoid_mean(F&& f, double horizon, std::size_t steps) {
  detail::check_grid(horizon, steps);
  const double h = horizon / static_cast<double>(steps);
  double acc = 0.5 * (f(0.0) + f(horizon));
  for (std::size_t i = 1; i < steps; ++i) acc += f(h * static_cast<double>(i));
  return acc * h / horizon;
}

/// Vector-valued trapezoid mean; f(t) returns a std::vector<double> of a
/// fixed length.
template <class F>
std::vector<double> trapezoid_mean_vector(F&& f, double horizon, std::size_t steps) {
  detail::check_grid(horizon, steps);
  const double h = horizon / static_cast<double>(steps);
  std::vector<double> acc = f(0.0);
  for (double& a : acc) a *= 0.5;
  auto add = [&acc](const std::vector<double>& v, double w) {
    if (v.size() != acc.size()) throw NumericalError("integrand changed length");
    for (std::size_t j = 0; j < v.size(); ++j) acc[j] += w * v[j];
  };
  for (std::size_t i = 1; i < steps; ++i) add(f(h * static_cast<double>(i)), 1.0);
  add(f(horizon), 0.5);
  for (double& a : acc) a *= h / horizon;
  return acc;
}

}  // namespace ultrawalk
