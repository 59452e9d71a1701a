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

// Classical random walk with generator Q = H (default eps_0, rows sum to 0).
// Q shares the spectral projectors of the quantum Hamiltonian, so the
// distribution is the quantum class profile with exp(i t eta_m) replaced by
// exp(t eta_m). All eta_m <= 0 and every term of the telescoped sum is
// non-negative, so positivity holds in floating point too.

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ultrawalk/dense.hpp"
#include "ultrawalk/errors.hpp"
#include "ultrawalk/hamiltonian.hpp"
#include "ultrawalk/quantum_walk.hpp"

namespace ultrawalk {

namespace detail {

inline void check_generator_params(const EpsilonSequence& es) {
  if (es.overrides_eps0()) {
    throw ValidationError("classical generator needs the default eps_0 (rows must sum to zero)");
  }
}

inline void check_classical_time(double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
  if (t < 0.0) throw DomainError("classical semigroup is defined for t >= 0 only");
}

}  // namespace detail

/// Dense generator (oracle only).
inline Eigen::MatrixXd generator(const EpsilonSequence& es, const TreeParams& tp,
                                 std::size_t dense_cap = kDefaultDenseCap) {
  detail::check_generator_params(es);
  return build_hamiltonian(es, tp, dense_cap);
}

inline ProbabilityProfile classical_distribution(const WalkParams& wp, double t) {
  detail::check_generator_params(wp.eps());
  detail::check_classical_time(t);
  const auto& etas = wp.spectrum().etas;
  std::vector<double> x(etas.size());
  for (std::size_t m = 0; m < etas.size(); ++m) x[m] = std::exp(t * etas[m]);
  return detail::spectral_class_profile<double>(x, wp.p());
}

/// P_c(0, t) - p^-M = (p-1) sum_{m<M} p^-(m+1) exp(t eta_m), without
/// subtracting the plateau numerically.
inline double return_excess(const WalkParams& wp, double t) {
  detail::check_generator_params(wp.eps());
  detail::check_classical_time(t);
  const auto& etas = wp.spectrum().etas;
  const double p = wp.p();
  double acc = 0.0;
  double w = (p - 1.0) / p;
  for (int m = 0; m < wp.depth(); ++m) {
    acc += w * std::exp(t * etas[m]);
    w /= p;
  }
  return acc;
}

/// P_c(0, t), non-increasing from 1 to the plateau p^-M.
inline double return_probability(const WalkParams& wp, double t) {
  return return_excess(wp, t) + std::pow(static_cast<double>(wp.p()), -wp.depth());
}

/// Dense exp(tQ) e_0 (oracle only).
inline std::vector<double> classical_oracle(const WalkParams& wp, double t,
                                            std::size_t dense_cap = kDefaultDenseCap) {
  detail::check_classical_time(t);
  return semigroup_column(generator(wp.eps(), wp.tree(), dense_cap), t);
}

// ---------------------------------------------------------------------------
// Decay-law fits.

enum class DecayModel { power, stretched, logarithmic };

inline std::string_view to_string(DecayModel m) {
  switch (m) {
    case DecayModel::power:
      return "power";
    case DecayModel::stretched:
      return "stretched";
    case DecayModel::logarithmic:
      return "logarithmic";
  }
  return "unknown";
}

inline DecayModel parse_decay_model(std::string_view s) {
  if (s == "power") return DecayModel::power;
  if (s == "stretched") return DecayModel::stretched;
  if (s == "logarithmic") return DecayModel::logarithmic;
  throw ValidationError("unknown decay model '" + std::string(s) +
                        "' (expected power, stretched or logarithmic)");
}

struct DecayWindow {
  double t_min = 0.0;
  double t_max = 0.0;
};

struct DecayFitResult {
  DecayModel model = DecayModel::power;
  /// Slope in the model's linearising coordinates:
  ///   power        log E      vs log t   (E ~ t^slope)
  ///   stretched    log(-log E) vs log t  (slope = 1/alpha)
  ///   logarithmic  1/E        vs log t   (E ~ 1/(slope log t))
  /// where E = P_c(0,t) - p^-M.
  double slope = 0.0;
  double intercept = 0.0;
  DecayWindow window;
  /// RMS of log(E_fit) - log(E) over the samples. Shared by all models so
  /// fits can be compared against each other.
  double residual = 0.0;
  std::size_t samples = 0;
};

namespace detail {

struct LineFit {
  double slope;
  double intercept;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

}  // namespace detail

/// Fits the plateau-subtracted return probability on `samples` log-spaced
/// times in the window. Throws ValidationError if the window is empty or if
/// E(t_max) < 10 p^-M (the window reaches the finite-depth plateau).
inline DecayFitResult fit_decay(const WalkParams& wp, DecayWindow window, DecayModel model,
                                std::size_t samples = 200) {
  if (!(window.t_min > 0.0) || !(window.t_max > window.t_min) || !std::isfinite(window.t_max)) {
    throw ValidationError("decay window needs 0 < t_min < t_max");
  }
  if (samples < 3) throw ValidationError("decay fit needs at least 3 samples");
  const double plateau = std::pow(static_cast<double>(wp.p()), -wp.depth());
  const double tail = return_excess(wp, window.t_max);
  if (!(tail >= 10.0 * plateau)) {
    throw ValidationError("decay window reaches the plateau: P_c - p^-M = " +
                          detail::fmt_double(tail) + " < 10 p^-M = " +
                          detail::fmt_double(10.0 * plateau) + " at t_max");
  }

  std::vector<double> lt(samples), le(samples), x(samples), y(samples);
  const double a = std::log(window.t_min);
  const double b = std::log(window.t_max);
  for (std::size_t i = 0; i < samples; ++i) {
    lt[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double e = return_excess(wp, std::exp(lt[i]));
    le[i] = std::log(e);
    x[i] = lt[i];
    switch (model) {
      case DecayModel::power:
        y[i] = le[i];
        break;
      case DecayModel::stretched:
        y[i] = std::log(-le[i]);
        break;
      case DecayModel::logarithmic:
        y[i] = 1.0 / e;
        break;
    }
  }
  const detail::LineFit line = detail::least_squares(x, y);

  double ss = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double fy = line.intercept + line.slope * x[i];
    double predicted = 0.0;
    switch (model) {
      case DecayModel::power:
        predicted = fy;
        break;
      case DecayModel::stretched:
        predicted = -std::exp(fy);
        break;
      case DecayModel::logarithmic:
        predicted = fy > 0.0 ? -std::log(fy) : std::numeric_limits<double>::infinity();
        break;
    }
    const double d = predicted - le[i];
    ss += d * d;
  }
  DecayFitResult r;
  r.model = model;
  r.slope = line.slope;
  r.intercept = line.intercept;
  r.window = window;
  r.residual = std::sqrt(ss / static_cast<double>(samples));
  r.samples = samples;
  return r;
}

inline DecayFitResult fit_decay(const Landscape& ls, const TreeParams& tp, DecayWindow window,
                                DecayModel model, std::size_t samples = 200) {
  return fit_decay(WalkParams::make(ls, tp), window, model, samples);
}

}  // namespace ultrawalk
