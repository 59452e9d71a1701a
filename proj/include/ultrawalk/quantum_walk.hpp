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

// Continuous-time quantum walk exp(itH)|0> on the ball hierarchy.
//
// The amplitude is constant on every class V_k, so a p^M-site state is held
// as M+1 values (a ClassProfile). With z_m = exp(i t eta_m) the class values
// are
//   V_0 : (p-1) sum_{m<M} p^-(m+1) z_m + p^-M z_M
//   V_k : sum_{j=k..M} p^-j (z_j - z_{j-1})        (1 <= k <= M)
// The second line is the telescoped form of
//   -p^-k z_{k-1} + (p-1) sum_{m=k}^{M-1} p^-(m+1) z_m + p^-M z_M,
// evaluated by one suffix sweep and exactly zero at t = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ultrawalk/dense.hpp"
#include "ultrawalk/errors.hpp"
#include "ultrawalk/hamiltonian.hpp"
#include "ultrawalk/quadrature.hpp"
#include "ultrawalk/rational.hpp"
#include "ultrawalk/ultrametric_space.hpp"

namespace ultrawalk {

/// One walk instance. Immutable and safe to share across threads.
class WalkParams {
 public:
  static WalkParams make(TreeParams tp, EpsilonSequence es) {
    Spectrum base = spectrum_default_diagonal(es, tp);
    Spectrum s = spectrum_closed(es, tp);
    return WalkParams(std::move(tp), std::move(es), std::move(s), std::move(base.etas));
  }

  static WalkParams make(const Landscape& ls, const TreeParams& tp) {
    return make(tp, epsilon_sequence(ls, tp));
  }

  const TreeParams& tree() const noexcept { return tp_; }
  const EpsilonSequence& eps() const noexcept { return es_; }
  const Spectrum& spectrum() const noexcept { return spectrum_; }
  /// eta_m for the default eps_0; the override enters only as exp(it shift).
  const std::vector<double>& unshifted_etas() const noexcept { return unshifted_; }
  int p() const noexcept { return tp_.p(); }
  int depth() const noexcept { return tp_.depth(); }

 private:
  WalkParams(TreeParams tp, EpsilonSequence es, Spectrum s, std::vector<double> unshifted)
      : tp_(std::move(tp)),
        es_(std::move(es)),
        spectrum_(std::move(s)),
        unshifted_(std::move(unshifted)) {}

  TreeParams tp_;
  EpsilonSequence es_;
  Spectrum spectrum_;
  std::vector<double> unshifted_;
};

/// One value per class V_0..V_M.
template <class T>
struct ClassProfile {
  std::vector<T> values;

  std::size_t size() const noexcept { return values.size(); }
  const T& operator[](std::size_t k) const { return values[k]; }
  T& operator[](std::size_t k) { return values[k]; }
};

using AmplitudeProfile = ClassProfile<std::complex<double>>;
using ProbabilityProfile = ClassProfile<double>;
using ExactProfile = ClassProfile<Rational>;

/// sum_k |V_k| |v_k|^2.
inline double expanded_norm_squared(const AmplitudeProfile& a, const TreeParams& tp) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += static_cast<double>(class_size(static_cast<int>(k), tp)) * std::norm(a[k]);
  }
  return acc;
}

/// sum_k |V_k| v_k.
inline double expanded_total(const ProbabilityProfile& a, const TreeParams& tp) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += static_cast<double>(class_size(static_cast<int>(k), tp)) * a[k];
  }
  return acc;
}

inline Rational expanded_total(const ExactProfile& a, const TreeParams& tp) {
  Rational acc = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    acc += Rational(class_size(static_cast<int>(k), tp)) * a[k];
  }
  return acc;
}

/// Per-site vector of length p^M, constant on each class.
template <class T>
std::vector<T> expand_profile(const ClassProfile<T>& prof, const TreeParams& tp) {
  std::vector<T> out(tp.sites());
  for (std::uint64_t n = 0; n < tp.sites(); ++n) {
    out[n] = prof[static_cast<std::size_t>(level_class_of(SiteIndex{n}, tp))];
  }
  return out;
}

namespace detail {

inline void check_time(double t) {
  if (!std::isfinite(t)) throw DomainError("time must be finite");
}

/// p^-j for 0 <= j <= M.
inline std::vector<double> inverse_powers(int p, int M) {
  std::vector<double> out(static_cast<std::size_t>(M) + 1);
  for (int j = 0; j <= M; ++j) out[j] = std::pow(static_cast<double>(p), -j);
  return out;
}

/// Class values of sum_m P_m f(eta_m) e_0 where P_m are the spectral
/// projectors, for any scalar field f (phases for the quantum walk, decays
/// for the classical one).
template <class Scalar>
ClassProfile<Scalar> spectral_class_profile(std::span<const Scalar> z, int p) {
  const int M = static_cast<int>(z.size()) - 1;
  const auto inv = inverse_powers(p, M);
  ClassProfile<Scalar> out;
  out.values.assign(static_cast<std::size_t>(M) + 1, Scalar{});
  Scalar root = inv[M] * z[M];
  for (int m = 0; m < M; ++m) root += (static_cast<double>(p - 1) * inv[m + 1]) * z[m];
  out[0] = root;
  Scalar acc{};
  for (int k = M; k >= 1; --k) {
    acc += inv[k] * (z[k] - z[k - 1]);
    out[k] = acc;
  }
  return out;
}

/// Same profile from the offsets d_m = f(eta_m) - 1. The root class is
/// 1 + sum_m w_m d_m, which is exactly 1 when every offset vanishes.
template <class Scalar>
ClassProfile<Scalar> spectral_class_profile_offsets(std::span<const Scalar> d, int p) {
  const int M = static_cast<int>(d.size()) - 1;
  const auto inv = inverse_powers(p, M);
  ClassProfile<Scalar> out;
  out.values.assign(static_cast<std::size_t>(M) + 1, Scalar{});
  Scalar root = inv[M] * d[M];
  for (int m = 0; m < M; ++m) root += (static_cast<double>(p - 1) * inv[m + 1]) * d[m];
  out[0] = Scalar(1.0) + root;
  Scalar acc{};
  for (int k = M; k >= 1; --k) {
    acc += inv[k] * (d[k] - d[k - 1]);
    out[k] = acc;
  }
  return out;
}

/// exp(i theta) - 1 without cancellation for small theta.
inline std::complex<double> phase_offset(double theta) {
  const double s = std::sin(0.5 * theta);
  return {-2.0 * s * s, std::sin(theta)};
}

}  // namespace detail

namespace detail {

/// Amplitude profile for the default eps_0.
inline AmplitudeProfile phase_free_amplitude(const WalkParams& wp, double t) {
  check_time(t);
  const auto& etas = wp.unshifted_etas();
  std::vector<std::complex<double>> d(etas.size());
  for (std::size_t m = 0; m < etas.size(); ++m) d[m] = phase_offset(t * etas[m]);
  return spectral_class_profile_offsets<std::complex<double>>(d, wp.p());
}

}  // namespace detail

/// Class-compressed amplitude <n| exp(itH) |0>. O(M).
inline AmplitudeProfile amplitude(const WalkParams& wp, double t) {
  AmplitudeProfile a = detail::phase_free_amplitude(wp, t);
  const double shift = wp.eps().spectral_shift();
  if (shift != 0.0) {
    const std::complex<double> phase = std::polar(1.0, t * shift);
    for (auto& v : a.values) v *= phase;
  }
  return a;
}

/// |amplitude|^2 per class; the eps_0 shift drops out exactly.
inline ProbabilityProfile probabilities(const WalkParams& wp, double t) {
  const AmplitudeProfile a = detail::phase_free_amplitude(wp, t);
  ProbabilityProfile out;
  out.values.reserve(a.size());
  for (const auto& v : a.values) out.values.push_back(std::norm(v));
  return out;
}

/// Probability of finding the walker at site n at time t.
inline double probability(const WalkParams& wp, SiteIndex n, double t) {
  const int k = level_class_of(n, wp.tree());
  return probabilities(wp, t)[static_cast<std::size_t>(k)];
}

/// Dense exp(itH) e_0 by numeric diagonalisation. Oracle only.
inline std::vector<std::complex<double>> evolve_oracle(const WalkParams& wp, double t,
                                                       std::size_t dense_cap = kDefaultDenseCap) {
  detail::check_time(t);
  return unitary_column(build_hamiltonian(wp.eps(), wp.tree(), dense_cap), t);
}

/// Exact long-time average per class; depends on p and M only.
///   V_0 : (p-1)/(p+1) + 2/((p+1) p^2M)
///   V_k : 2/(p+1) (p^-(2k-1) + p^-2M)
///   V_M : 2/p^2M
inline ExactProfile time_averaged_exact(const TreeParams& tp) {
  const auto p = static_cast<std::uint64_t>(tp.p());
  const auto M = static_cast<unsigned>(tp.depth());
  const Rational inv2M = rpow_inv(p, 2 * M);
  const Rational pp1(p + 1);
  ExactProfile out;
  out.values.reserve(M + 1);
  out.values.push_back(Rational(p - 1) / pp1 + 2 * inv2M / pp1);
  for (unsigned k = 1; k < M; ++k) {
    out.values.push_back(2 / pp1 * (rpow_inv(p, 2 * k - 1) + inv2M));
  }
  out.values.push_back(2 * inv2M);
  return out;
}

/// Time average for a walk instance. The result reads only p and M; the
/// strict ε ordering validated at construction guarantees distinct eta_m.
inline ProbabilityProfile time_averaged(const WalkParams& wp) {
  const ExactProfile ex = time_averaged_exact(wp.tree());
  ProbabilityProfile out;
  for (const auto& v : ex.values) out.values.push_back(to_double(v));
  return out;
}

/// Smallest nonzero |eta_i - eta_j| or |eta_i|; sets the 1/(T g) rate at
/// which finite-horizon averages converge.
inline double spectral_gap(const Spectrum& s) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.etas[i] != 0.0) g = std::min(g, std::abs(s.etas[i]));
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      g = std::min(g, std::abs(s.etas[i] - s.etas[j]));
    }
  }
  return g;
}

inline double max_abs_eta(const Spectrum& s) {
  double m = 0.0;
  for (double e : s.etas) m = std::max(m, std::abs(e));
  return m;
}

/// (1/T) int_0^T P(V_k, s) ds by the trapezoid rule. The grid spacing must
/// resolve the fastest phase: T/steps <= 0.1 / max|eta|.
inline ProbabilityProfile time_averaged_numeric(const WalkParams& wp, double horizon,
                                                std::size_t steps) {
  detail::check_grid(horizon, steps);
  const double h = horizon / static_cast<double>(steps);
  const double hmax = 0.1 / max_abs_eta(wp.spectrum());
  if (h > hmax) {
    throw ValidationError("time grid undersampled: step " + detail::fmt_double(h) +
                          " exceeds 0.1/max|eta| = " + detail::fmt_double(hmax));
  }
  ProbabilityProfile out;
  out.values = trapezoid_mean_vector([&wp](double t) { return probabilities(wp, t).values; },
                                     horizon, steps);
  return out;
}

// ---------------------------------------------------------------------------
// Infinite depth.

/// eta_m for all m >= 0 of an unbounded coupling sequence eps_1, eps_2, ...
/// taken with eps_0 = 0 (a global phase):
///   eta_0 = -eps_1,  eta_m = (p-1) sum_{k<=m} p^(k-1) eps_k - p^m eps_{m+1}.
class InfiniteEtaSequence {
 public:
  using Coupling = std::function<double(int k)>;

  InfiniteEtaSequence(int p, Coupling coupling) : p_(p), coupling_(std::move(coupling)) {
    if (p < 2) throw ValidationError("branching degree p must be >= 2");
    if (!coupling_) throw ValidationError("empty coupling function");
  }

  /// Uses a formula landscape with a fixed reference level so eps_k is
  /// defined for every k >= 1 independently of any depth.
  static InfiniteEtaSequence from_landscape(const Landscape& ls, int p) {
    validate_landscape(ls);
    if (std::holds_alternative<ExplicitLandscape>(ls)) {
      throw ValidationError("infinite depth needs a formula landscape, not an explicit list");
    }
    const auto ref = landscape_reference_level(ls);
    if (!ref) {
      throw ValidationError("infinite depth needs an explicit reference level for the landscape");
    }
    return InfiniteEtaSequence(p, [ls, p, r = *ref](int k) { return landscape_coupling(ls, p, k, r); });
  }

  int p() const noexcept { return p_; }

  std::vector<double> first(std::size_t count) const {
    std::vector<double> out(count);
    double prefix = 0.0;  // (p-1) sum_{k<=m} p^(k-1) eps_k
    double pm = 1.0;      // p^m
    for (std::size_t m = 0; m < count; ++m) {
      const int k = static_cast<int>(m) + 1;
      out[m] = prefix - pm * coupling_(k);
      prefix += (p_ - 1) * pm * coupling_(k);
      pm *= p_;
    }
    return out;
  }

 private:
  int p_;
  Coupling coupling_;
};

struct TruncatedValue {
  double value = 0.0;
  /// Guaranteed bound on |value - exact|.
  double tail_radius = 0.0;
};

/// Infinite-depth probability on class V_k from eta_0..eta_{K-1}.
///
/// The unresolved tail sum_{m>=K} (p-1) p^-(m+1) z_m (total weight p^-K) is
/// represented by p^-K z_{K-1}; the amplitude error is at most 2 p^-K, so
/// the probability error is at most 4 p^-K + 4 p^-2K.
inline TruncatedValue probability_infinite(int p, std::span<const double> etas, int k, double t,
                                           int truncation) {
  detail::check_time(t);
  if (k < 0) throw DomainError("class index must be >= 0");
  if (truncation <= k) {
    throw ValidationError("truncation K = " + std::to_string(truncation) +
                          " must exceed the class index " + std::to_string(k));
  }
  if (etas.size() < static_cast<std::size_t>(truncation)) {
    throw ValidationError("need at least K eigenvalues");
  }
  const int K = truncation;
  std::vector<std::complex<double>> d(static_cast<std::size_t>(K) + 1);
  for (int m = 0; m < K; ++m) d[m] = detail::phase_offset(t * etas[m]);
  d[K] = d[K - 1];
  const AmplitudeProfile a = detail::spectral_class_profile_offsets<std::complex<double>>(d, p);
  const double delta = 2.0 * std::pow(static_cast<double>(p), -K);
  return {std::norm(a[static_cast<std::size_t>(k)]), 2.0 * delta + delta * delta};
}

inline TruncatedValue probability_infinite(const InfiniteEtaSequence& seq, int k, double t,
                                           int truncation) {
  if (truncation <= k) {
    throw ValidationError("truncation K = " + std::to_string(truncation) +
                          " must exceed the class index " + std::to_string(k));
  }
  const auto etas = seq.first(static_cast<std::size_t>(truncation));
  return probability_infinite(seq.p(), etas, k, t, truncation);
}

/// Depth-to-infinity limit of the exact time average:
/// (p-1)/(p+1) on V_0 and 2/((p+1) p^(2k-1)) on V_k.
inline Rational time_averaged_limit(int p, int k) {
  if (p < 2) throw DomainError("branching degree p must be >= 2");
  if (k < 0) throw DomainError("class index must be >= 0");
  const auto q = static_cast<std::uint64_t>(p);
  if (k == 0) return Rational(q - 1, q + 1);
  return Rational(2) / (Rational(q + 1) * Rational(ipow(q, 2 * static_cast<unsigned>(k) - 1)));
}

/// time_averaged_exact(p, M)[k] - time_averaged_limit(p, k) for every
/// 0 <= k <= M: 2/((p+1) p^2M).
inline Rational limit_gap(int p, int M) {
  const auto q = static_cast<std::uint64_t>(p);
  return Rational(2) / (Rational(q + 1) * Rational(ipow(q, 2 * static_cast<unsigned>(M))));
}

/// sum_{k>=1} sum_{n in V_k} p^-(M-k) P(n, t).
inline double mean_distance(const WalkParams& wp, double t) {
  const ProbabilityProfile prob = probabilities(wp, t);
  const auto& tp = wp.tree();
  double acc = 0.0;
  for (int k = 1; k <= tp.depth(); ++k) {
    acc += static_cast<double>(class_size(k, tp)) * prob[static_cast<std::size_t>(k)] /
           static_cast<double>(tp.power(tp.depth() - k));
  }
  return acc;
}

/// Closed form of the time-averaged mean distance:
///   2(p-1)(M-1)/((p+1)p^M) + 2[((p-1)(p+1)^2+1) p^(2M-2) - 1]/((p+1)^2 p^(3M-1)).
inline Rational time_averaged_mean_distance(const TreeParams& tp) {
  const auto p = static_cast<std::uint64_t>(tp.p());
  const auto M = static_cast<unsigned>(tp.depth());
  const BigInt pp1(p + 1);
  const Rational first(BigInt(2 * (p - 1) * (M - 1)), pp1 * ipow(p, M));
  const BigInt num = 2 * ((BigInt(p - 1) * pp1 * pp1 + 1) * ipow(p, 2 * M - 2) - 1);
  const Rational second(num, pp1 * pp1 * ipow(p, 3 * M - 1));
  return first + second;
}

/// The same quantity as the class-weighted sum of the exact time average.
inline Rational time_averaged_mean_distance_weighted(const TreeParams& tp) {
  const ExactProfile avg = time_averaged_exact(tp);
  Rational acc = 0;
  for (int k = 1; k <= tp.depth(); ++k) {
    acc += Rational(class_size(k, tp)) * avg[static_cast<std::size_t>(k)] /
           Rational(tp.power(tp.depth() - k));
  }
  return acc;
}

/// lim_{M->inf} p^M dbar_M / M.
inline Rational scaled_mean_distance_limit(int p) {
  return Rational(2 * (p - 1), p + 1);
}

/// Localization: strictly positive long-time weight on every class.
inline bool localized_everywhere(const ExactProfile& prof) {
  for (const auto& v : prof.values) {
    if (!(v > 0)) return false;
  }
  return true;
}

}  // namespace ultrawalk
