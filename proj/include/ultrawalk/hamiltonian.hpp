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

// Hierarchical (Parisi-type) Hamiltonian on the ball hierarchy.
//
// The coupling between two sites depends only on their separation level k:
// eps_1 > eps_2 > ... > eps_M > 0, with eps_0 on the diagonal. The spectrum
// has M+1 distinct values eta_0 < ... < eta_M and is available in closed
// form; the dense matrix is built only for verification.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ultrawalk/dense.hpp"
#include "ultrawalk/errors.hpp"
#include "ultrawalk/ultrametric_space.hpp"

namespace ultrawalk {

namespace detail {

inline std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace detail

/// Couplings eps_1..eps_M plus the diagonal eps_0.
///
/// The default diagonal -(p-1) sum_k p^(k-1) eps_k makes every row sum to
/// zero (the classical generator) and pins eta_M = 0. Any other eps_0 only
/// shifts the spectrum, which is a global phase for the quantum walk.
class EpsilonSequence {
 public:
  static EpsilonSequence make(std::vector<double> couplings, const TreeParams& tp,
                              std::optional<double> eps0 = std::nullopt) {
    const auto m = static_cast<std::size_t>(tp.depth());
    if (couplings.size() != m) {
      throw ValidationError("expected " + std::to_string(m) + " couplings eps_1..eps_" +
                            std::to_string(m) + ", got " + std::to_string(couplings.size()));
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(couplings[i])) {
        throw ValidationError("eps_" + std::to_string(i + 1) + " is not finite");
      }
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (!(couplings[i] > couplings[i + 1])) {
        throw ValidationError("ordering violated: eps_" + std::to_string(i + 1) + " = " +
                              detail::fmt_double(couplings[i]) + " must exceed eps_" +
                              std::to_string(i + 2) + " = " +
                              detail::fmt_double(couplings[i + 1]));
      }
    }
    if (!(couplings.back() > 0.0)) {
      throw ValidationError("ordering violated: eps_" + std::to_string(m) + " = " +
                            detail::fmt_double(couplings.back()) + " must be positive");
    }
    if (eps0 && !std::isfinite(*eps0)) throw ValidationError("eps_0 is not finite");

    EpsilonSequence es;
    es.p_ = tp.p();
    es.eps_ = std::move(couplings);
    double acc = 0.0;
    double pk = 1.0;
    for (double e : es.eps_) {
      acc += pk * e;
      pk *= tp.p();
    }
    es.default_eps0_ = -(tp.p() - 1) * acc;
    es.eps0_ = eps0.value_or(es.default_eps0_);
    es.overridden_ = eps0.has_value();
    return es;
  }

  int p() const noexcept { return p_; }
  int depth() const noexcept { return static_cast<int>(eps_.size()); }

  double eps0() const noexcept { return eps0_; }
  double default_eps0() const noexcept { return default_eps0_; }
  bool overrides_eps0() const noexcept { return overridden_; }

  /// eps_0 - default eps_0; the uniform shift applied to every eigenvalue.
  double spectral_shift() const noexcept { return overridden_ ? eps0_ - default_eps0_ : 0.0; }

  /// eps_k for 1 <= k <= M.
  double coupling(int k) const { return eps_.at(static_cast<std::size_t>(k - 1)); }
  std::span<const double> couplings() const noexcept { return eps_; }

  EpsilonSequence with_eps0(double eps0) const {
    if (!std::isfinite(eps0)) throw ValidationError("eps_0 is not finite");
    EpsilonSequence es = *this;
    es.eps0_ = eps0;
    es.overridden_ = true;
    return es;
  }

 private:
  EpsilonSequence() = default;

  int p_ = 2;
  std::vector<double> eps_;
  double eps0_ = 0.0;
  double default_eps0_ = 0.0;
  bool overridden_ = false;
};

// Transition-rate landscapes. Each formula is anchored at a reference level r
// (default: the depth M), so level k sees the scaled distance p^(k-r):
//   linear       eps_k = w0 p^(-(1+alpha)(k-r))
//   logarithmic  eps_k = w0 p^(-(k-r)) / log(1 + p^(-(k-r)))^alpha
//   exponential  eps_k = w0 p^(-(k-r)) exp(-alpha p^(k-r))
// Shifting r rescales time and lets one sequence serve every depth.

struct ExplicitLandscape {
  std::vector<double> eps;
};

struct LinearLandscape {
  double w0 = 1.0;
  double alpha = 1.0;
  std::optional<int> reference_level;
};

struct LogarithmicLandscape {
  double w0 = 1.0;
  double alpha = 1.2;
  std::optional<int> reference_level;
};

struct ExponentialLandscape {
  double w0 = 1.0;
  double alpha = 1.0;
  std::optional<int> reference_level;
};

using Landscape =
    std::variant<ExplicitLandscape, LinearLandscape, LogarithmicLandscape, ExponentialLandscape>;

namespace detail {

inline void check_w0_alpha(double w0, double alpha, double alpha_min, const char* name) {
  if (!(w0 > 0.0) || !std::isfinite(w0)) {
    throw ValidationError(std::string(name) + " landscape needs w0 > 0");
  }
  if (!(alpha > alpha_min) || !std::isfinite(alpha)) {
    throw ValidationError(std::string(name) + " landscape needs alpha > " +
                          fmt_double(alpha_min));
  }
}

}  // namespace detail

/// Validates landscape parameters (not the resulting ordering).
inline void validate_landscape(const Landscape& ls) {
  std::visit(
      [](const auto& l) {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, LinearLandscape>) {
          detail::check_w0_alpha(l.w0, l.alpha, 0.0, "linear");
        } else if constexpr (std::is_same_v<L, LogarithmicLandscape>) {
          detail::check_w0_alpha(l.w0, l.alpha, 1.0, "logarithmic");
        } else if constexpr (std::is_same_v<L, ExponentialLandscape>) {
          detail::check_w0_alpha(l.w0, l.alpha, 0.0, "exponential");
        }
      },
      ls);
}

/// eps_k of a formula landscape at the given reference level. Explicit
/// landscapes have no formula and are rejected.
inline double landscape_coupling(const Landscape& ls, int p, int k, int reference_level) {
  const double shift = static_cast<double>(k - reference_level);
  const double pp = static_cast<double>(p);
  return std::visit(
      [&](const auto& l) -> double {
        using L = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<L, ExplicitLandscape>) {
          throw ValidationError("explicit landscape has no closed-form coupling");
        } else if constexpr (std::is_same_v<L, LinearLandscape>) {
          return l.w0 * std::pow(pp, -(1.0 + l.alpha) * shift);
        } else if constexpr (std::is_same_v<L, LogarithmicLandscape>) {
          const double y = std::pow(pp, -shift);
          return l.w0 * y / std::pow(std::log1p(y), l.alpha);
        } else {
          const double x = std::pow(pp, shift);
          return l.w0 / x * std::exp(-l.alpha * x);
        }
      },
      ls);
}

inline std::optional<int> landscape_reference_level(const Landscape& ls) {
  return std::visit(
      [](const auto& l) -> std::optional<int> {
        if constexpr (std::is_same_v<std::decay_t<decltype(l)>, ExplicitLandscape>) {
          return std::nullopt;
        } else {
          return l.reference_level;
        }
      },
      ls);
}

/// Couplings for a landscape at depth tp.depth(), with the default eps_0.
/// The strict ordering is validated on the result.
inline EpsilonSequence epsilon_sequence(const Landscape& ls, const TreeParams& tp) {
  validate_landscape(ls);
  if (const auto* ex = std::get_if<ExplicitLandscape>(&ls)) {
    return EpsilonSequence::make(ex->eps, tp);
  }
  const int ref = landscape_reference_level(ls).value_or(tp.depth());
  std::vector<double> eps(static_cast<std::size_t>(tp.depth()));
  for (int k = 1; k <= tp.depth(); ++k) {
    eps[static_cast<std::size_t>(k - 1)] = landscape_coupling(ls, tp.p(), k, ref);
  }
  return EpsilonSequence::make(std::move(eps), tp);
}

/// The M+1 distinct eigenvalues and their multiplicities.
struct Spectrum {
  std::vector<double> etas;
  std::vector<std::uint64_t> mults;

  std::size_t size() const noexcept { return etas.size(); }
};

/// Closed-form spectrum for the default diagonal, ignoring any eps_0
/// override:
///   eta_m = -(p-1) sum_{k>m} p^(k-1) eps_k - p^m eps_{m+1},  eta_M = 0,
/// which equals eps_0 + (p-1) sum_{k<=m} p^(k-1) eps_k - p^m eps_{m+1} but
/// avoids cancelling large terms.
inline Spectrum spectrum_default_diagonal(const EpsilonSequence& es, const TreeParams& tp) {
  if (es.depth() != tp.depth() || es.p() != tp.p()) {
    throw ValidationError("epsilon sequence does not match the tree parameters");
  }
  const int M = tp.depth();
  const double p = tp.p();
  Spectrum s;
  s.etas.assign(static_cast<std::size_t>(M) + 1, 0.0);
  s.mults.assign(static_cast<std::size_t>(M) + 1, 1);

  // pw[k] = p^k as double
  std::vector<double> pw(static_cast<std::size_t>(M) + 1, 1.0);
  for (int k = 1; k <= M; ++k) pw[k] = pw[k - 1] * p;

  double tail = 0.0;  // sum_{k=m+1}^{M} p^(k-1) eps_k
  for (int m = M - 1; m >= 0; --m) {
    tail += pw[m] * es.coupling(m + 1);
    s.etas[m] = -(p - 1.0) * tail - pw[m] * es.coupling(m + 1);
  }
  s.etas[M] = 0.0;
  for (int m = 0; m < M; ++m) {
    s.mults[m] = static_cast<std::uint64_t>(tp.p() - 1) * tp.power(M - m - 1);
  }
  s.mults[M] = 1;
  return s;
}

/// Closed-form spectrum with any eps_0 override applied as a uniform shift.
inline Spectrum spectrum_closed(const EpsilonSequence& es, const TreeParams& tp) {
  Spectrum s = spectrum_default_diagonal(es, tp);
  const double shift = es.spectral_shift();
  if (shift != 0.0) {
    for (double& e : s.etas) e += shift;
  }
  return s;
}

/// Eigenvalues repeated by multiplicity, ascending.
inline std::vector<double> expand_spectrum(const Spectrum& s) {
  std::vector<double> out;
  for (std::size_t m = 0; m < s.size(); ++m) out.insert(out.end(), s.mults[m], s.etas[m]);
  std::sort(out.begin(), out.end());
  return out;
}

/// Dense Hamiltonian from the block recursion
///   H_1 = eps_0 I_p + eps_1 (J_p - I_p),
///   H_{L+1} = I_p (x) H_L + (J_p - I_p) (x) eps_{L+1} J_{p^L},
/// so the (n, n2) entry is eps at the separation level of n and n2.
inline Eigen::MatrixXd build_hamiltonian(const EpsilonSequence& es, const TreeParams& tp,
                                         std::size_t dense_cap = kDefaultDenseCap) {
  check_dense_cap(tp.sites(), dense_cap);
  if (es.depth() != tp.depth() || es.p() != tp.p()) {
    throw ValidationError("epsilon sequence does not match the tree parameters");
  }
  const Eigen::Index p = tp.p();
  Eigen::MatrixXd h = Eigen::MatrixXd::Constant(p, p, es.coupling(1));
  h.diagonal().setConstant(es.eps0());
  for (int level = 2; level <= tp.depth(); ++level) {
    const Eigen::Index b = h.rows();
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(p * b, p * b);
    const Eigen::MatrixXd off = Eigen::MatrixXd::Constant(b, b, es.coupling(level));
    for (Eigen::Index i = 0; i < p; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) {
        next.block(i * b, j * b, b, b) = (i == j) ? h : off;
      }
    }
    h = std::move(next);
  }
  return h;
}

/// Ascending eigenvalues of a dense symmetric matrix (oracle for spectrum_closed).
inline std::vector<double> spectrum_numeric(const Eigen::MatrixXd& h) {
  return symmetric_eigenvalues(h);
}

}  // namespace ultrawalk
