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

// Index arithmetic on the bottom level of the p-ary ball hierarchy.
//
// Sites are matrix indices 0 .. p^M - 1 of the block-recursive Hamiltonian:
// the most significant base-p digit selects the outermost block. Two sites
// separate at level k when they first agree after dropping their k lowest
// digits; their tree distance is p^-(M-k). The p-adic ball centres are the
// digit-reversed labels, see digit_reverse().

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "ultrawalk/errors.hpp"

namespace ultrawalk {

struct SiteIndex {
  std::uint64_t value{};

  constexpr SiteIndex() = default;
  constexpr explicit SiteIndex(std::uint64_t v) : value(v) {}

  friend constexpr auto operator<=>(SiteIndex, SiteIndex) = default;
};

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

class TreeParams {
 public:
  /// Throws ValidationError unless p >= 2, M >= 1 and p^M fits in 64 bits.
  /// Composite p is accepted with a warning.
  static TreeParams make(int p, int M) {
    if (p < 2) {
      throw ValidationError("branching degree p must be >= 2, got " + std::to_string(p));
    }
    if (M < 1) {
      throw ValidationError("depth M must be >= 1, got " + std::to_string(M));
    }
    TreeParams tp;
    tp.p_ = p;
    tp.depth_ = M;
    tp.powers_.reserve(static_cast<std::size_t>(M) + 1);
    tp.powers_.push_back(1);
    for (int k = 1; k <= M; ++k) {
      std::uint64_t next = 0;
      if (__builtin_mul_overflow(tp.powers_.back(), static_cast<std::uint64_t>(p), &next)) {
        throw ValidationError("site count " + std::to_string(p) + "^" + std::to_string(M) +
                              " overflows 64-bit site indices");
      }
      tp.powers_.push_back(next);
    }
    if (!is_prime(p)) {
      warn("p = " + std::to_string(p) +
           " is composite; the hierarchy is well defined but has no p-adic reading");
    }
    return tp;
  }

  int p() const noexcept { return p_; }
  int depth() const noexcept { return depth_; }
  std::uint64_t sites() const noexcept { return powers_.back(); }

  /// p^k for 0 <= k <= M.
  std::uint64_t power(int k) const { return powers_.at(static_cast<std::size_t>(k)); }

  bool contains(SiteIndex n) const noexcept { return n.value < sites(); }

  friend bool operator==(const TreeParams& a, const TreeParams& b) {
    return a.p_ == b.p_ && a.depth_ == b.depth_;
  }

 private:
  TreeParams() = default;

  int p_ = 2;
  int depth_ = 1;
  std::vector<std::uint64_t> powers_;
};

namespace detail {

inline void check_site(SiteIndex n, const TreeParams& tp) {
  if (!tp.contains(n)) {
    throw DomainError("site index " + std::to_string(n.value) + " outside [0, " +
                      std::to_string(tp.sites()) + ")");
  }
}

inline void check_level(int k, const TreeParams& tp) {
  if (k < 0 || k > tp.depth()) {
    throw DomainError("level " + std::to_string(k) + " outside [0, " +
                      std::to_string(tp.depth()) + "]");
  }
}

}  // namespace detail

/// Smallest k with floor(a / p^k) == floor(b / p^k).
inline int separation_level(SiteIndex a, SiteIndex b, const TreeParams& tp) {
  detail::check_site(a, tp);
  detail::check_site(b, tp);
  const auto p = static_cast<std::uint64_t>(tp.p());
  std::uint64_t x = a.value;
  std::uint64_t y = b.value;
  int k = 0;
  while (x != y) {
    x /= p;
    y /= p;
    ++k;
  }
  return k;
}

/// p^-(M-k) for sites separating at level k >= 1, and 0 for equal sites.
inline double tree_distance(SiteIndex a, SiteIndex b, const TreeParams& tp) {
  const int k = separation_level(a, b, tp);
  if (k == 0) return 0.0;
  return 1.0 / static_cast<double>(tp.power(tp.depth() - k));
}

/// Index k of the class V_k containing n; V_k collects the sites that
/// separate from site 0 at level k.
inline int level_class_of(SiteIndex n, const TreeParams& tp) {
  detail::check_site(n, tp);
  int k = 0;
  for (std::uint64_t x = n.value; x != 0; x /= static_cast<std::uint64_t>(tp.p())) ++k;
  return k;
}

/// |V_0| = 1, |V_k| = (p-1) p^(k-1).
inline std::uint64_t class_size(int k, const TreeParams& tp) {
  detail::check_level(k, tp);
  if (k == 0) return 1;
  return static_cast<std::uint64_t>(tp.p() - 1) * tp.power(k - 1);
}

/// Smallest site of V_k.
inline SiteIndex class_representative(int k, const TreeParams& tp) {
  detail::check_level(k, tp);
  return SiteIndex{k == 0 ? 0 : tp.power(k - 1)};
}

inline std::vector<SiteIndex> class_members(int k, const TreeParams& tp) {
  detail::check_level(k, tp);
  if (k == 0) return {SiteIndex{0}};
  std::vector<SiteIndex> out;
  out.reserve(class_size(k, tp));
  for (std::uint64_t n = tp.power(k - 1); n < tp.power(k); ++n) out.emplace_back(n);
  return out;
}

/// Reverses the M base-p digits of n, mapping matrix indices to ball centres.
inline SiteIndex digit_reverse(SiteIndex n, const TreeParams& tp) {
  detail::check_site(n, tp);
  const auto p = static_cast<std::uint64_t>(tp.p());
  std::uint64_t x = n.value;
  std::uint64_t r = 0;
  for (int i = 0; i < tp.depth(); ++i) {
    r = r * p + x % p;
    x /= p;
  }
  return SiteIndex{r};
}

/// Largest v with p^v | n.
inline int padic_valuation(std::uint64_t n, int p) {
  if (p < 2) throw DomainError("valuation base must be >= 2");
  if (n == 0) throw DomainError("p-adic valuation of 0 is infinite");
  int v = 0;
  const auto q = static_cast<std::uint64_t>(p);
  while (n % q == 0) {
    n /= q;
    ++v;
  }
  return v;
}

}  // namespace ultrawalk
