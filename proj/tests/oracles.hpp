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

// Independent reference implementations used only by the tests. None of
// these call into the library's closed forms.

#include <cmath>
#include <complex>
#include <algorithm>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ultrawalk/rational.hpp"

namespace oracle {

using IntMatrix = std::vector<std::vector<int>>;

inline IntMatrix kron(const IntMatrix& a, const IntMatrix& b) {
  const std::size_t ra = a.size(), rb = b.size();
  IntMatrix out(ra * rb, std::vector<int>(ra * rb, 0));
  for (std::size_t i = 0; i < ra; ++i)
    for (std::size_t j = 0; j < ra; ++j)
      for (std::size_t k = 0; k < rb; ++k)
        for (std::size_t l = 0; l < rb; ++l) out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
  return out;
}

inline IntMatrix add(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] += b[i][j];
  return out;
}

inline IntMatrix identity(std::size_t n) {
  IntMatrix m(n, std::vector<int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IntMatrix ones(std::size_t n, int v = 1) { return IntMatrix(n, std::vector<int>(n, v)); }

/// Matrix of separation levels obtained by unrolling the Kronecker recursion
/// with symbolic couplings: entry (a, b) holds k where H[a][b] = eps_k.
inline IntMatrix level_matrix(int p, int M) {
  const auto up = static_cast<std::size_t>(p);
  IntMatrix off = add(ones(up), kron(ones(1, -1), identity(up)));  // J - I
  IntMatrix level = off;
  std::size_t size = up;
  for (int m = 2; m <= M; ++m) {
    level = add(kron(identity(up), level), kron(off, ones(size, m)));
    size *= up;
  }
  return level;
}

/// H built entry by entry from the level matrix.
inline Eigen::MatrixXd entrywise_hamiltonian(int p, int M, const std::vector<double>& eps,
                                             double eps0) {
  const IntMatrix lv = level_matrix(p, M);
  const auto n = static_cast<Eigen::Index>(lv.size());
  Eigen::MatrixXd h(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      h(a, b) = lv[a][b] == 0 ? eps0 : eps[static_cast<std::size_t>(lv[a][b] - 1)];
  return h;
}

/// -(p-1) sum p^(k-1) eps_k, summed naively.
inline double default_eps0(int p, const std::vector<double>& eps) {
  double s = 0.0;
  for (std::size_t k = 1; k <= eps.size(); ++k) s += std::pow(p, k - 1.0) * eps[k - 1];
  return -(p - 1) * s;
}

/// e^{itH} e_0 via a fresh eigendecomposition.
inline std::vector<std::complex<double>> unitary_column(const Eigen::MatrixXd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const auto& v = es.eigenvectors();
  const auto& lam = es.eigenvalues();
  std::vector<std::complex<double>> out(static_cast<std::size_t>(h.rows()));
  for (Eigen::Index n = 0; n < h.rows(); ++n) {
    std::complex<double> acc{};
    for (Eigen::Index j = 0; j < h.rows(); ++j) acc += v(n, j) * v(0, j) * std::polar(1.0, t * lam(j));
    out[n] = acc;
  }
  return out;
}

/// e^{tQ} e_0 via a fresh eigendecomposition.
inline std::vector<double> semigroup_column(const Eigen::MatrixXd& q, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const auto& v = es.eigenvectors();
  const auto& lam = es.eigenvalues();
  std::vector<double> out(static_cast<std::size_t>(q.rows()));
  for (Eigen::Index n = 0; n < q.rows(); ++n) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < q.rows(); ++j) acc += v(n, j) * v(0, j) * std::exp(t * lam(j));
    out[n] = acc;
  }
  return out;
}

/// Class amplitudes written out term by term (quadratic cost).
inline std::vector<std::complex<double>> amplitude_terms(int p, int M, const std::vector<double>& eta,
                                                         double t) {
  auto e = [&](int m) { return std::polar(1.0, t * eta[static_cast<std::size_t>(m)]); };
  const double pm = std::pow(p, -M);
  std::vector<std::complex<double>> out(static_cast<std::size_t>(M) + 1);
  std::complex<double> v0 = pm;
  for (int m = 0; m < M; ++m) v0 += (p - 1.0) * std::pow(p, -(m + 1.0)) * e(m);
  out[0] = v0;
  for (int k = 1; k < M; ++k) {
    std::complex<double> v = -std::pow(p, -double(k)) * e(k - 1) + pm;
    for (int m = k; m < M; ++m) v += (p - 1.0) * std::pow(p, -(m + 1.0)) * e(m);
    out[static_cast<std::size_t>(k)] = v;
  }
  out[static_cast<std::size_t>(M)] = pm * (1.0 - e(M - 1));
  return out;
}

/// Eigenvalues written directly as eps_0 + (p-1) sum_{k<=m} p^(k-1) eps_k - p^m eps_{m+1}.
inline std::vector<double> etas_direct(int p, const std::vector<double>& eps, double eps0) {
  const int M = static_cast<int>(eps.size());
  std::vector<double> eta(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m < M; ++m) {
    double s = eps0;
    for (int k = 1; k <= m; ++k) s += (p - 1) * std::pow(p, k - 1.0) * eps[k - 1];
    eta[m] = s - std::pow(p, double(m)) * eps[m];
  }
  double s = eps0;
  for (int k = 1; k <= M; ++k) s += (p - 1) * std::pow(p, k - 1.0) * eps[k - 1];
  eta[M] = s;
  return eta;
}

inline int trial_division_valuation(std::uint64_t n, int p) {
  int v = 0;
  std::uint64_t pv = 1;
  while (n % (pv * p) == 0) {
    pv *= p;
    ++v;
  }
  return v;
}

inline std::uint64_t reverse_digits(std::uint64_t n, int p, int M) {
  std::string digits;
  for (int i = 0; i < M; ++i) {
    digits.push_back(static_cast<char>('0' + n % p));
    n /= p;
  }
  // digits holds least significant first; read it back as most significant first
  std::uint64_t out = 0;
  for (char c : digits) out = out * p + static_cast<std::uint64_t>(c - '0');
  return out;
}

/// Power series sum_k (-1)^k (t/2)^(2k+n) / (k! (k+n)!), long double.
inline double bessel_series(int n, double t, int terms = 60) {
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= (t / 2.0L) / i;
  long double sum = 0.0L;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= -(t / 2.0L) * (t / 2.0L) / ((k + 1.0L) * (k + 1.0L + n));
  }
  return static_cast<double>(sum);
}

/// |<n| e^{itA} |0>|^2 on the cycle from the discrete Fourier basis.
inline double cycle_probability(int N, int n, double t) {
  std::complex<double> a{};
  for (int j = 0; j < N; ++j) {
    const double th = 2.0 * std::numbers::pi * j / N;
    a += std::polar(1.0, 2.0 * t * std::cos(th) + th * n);
  }
  return std::norm(a) / (double(N) * N);
}

/// Trapezoid mean (1/T) int_0^T f.
template <class F>
double trapezoid(F f, double T, std::size_t steps) {
  const double h = T / static_cast<double>(steps);
  double s = 0.5 * (f(0.0) + f(T));
  for (std::size_t i = 1; i < steps; ++i) s += f(h * static_cast<double>(i));
  return s * h / T;
}

/// Printed closed form for the time-averaged mean distance.
inline ultrawalk::Rational mean_distance_formula(int p, int M) {
  using ultrawalk::Rational;
  const Rational P(p);
  auto pw = [&](int e) {
    Rational r(1);
    for (int i = 0; i < e; ++i) r *= P;
    return r;
  };
  const Rational first = Rational(2 * (p - 1) * (M - 1)) / ((P + 1) * pw(M));
  const Rational second = 2 * (((P - 1) * (P + 1) * (P + 1) + 1) * pw(2 * M - 2) - 1) /
                          ((P + 1) * (P + 1) * pw(3 * M - 1));
  return first + second;
}

/// Strictly decreasing positive couplings drawn from [0.1, 10].
inline std::vector<double> random_eps(std::mt19937_64& rng, int M) {
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::vector<double> eps;
  while (static_cast<int>(eps.size()) < M) {
    const double x = u(rng);
    bool fresh = true;
    for (double y : eps) fresh = fresh && std::abs(x - y) > 1e-3;
    if (fresh) eps.push_back(x);
  }
  std::sort(eps.begin(), eps.end(), std::greater<>());
  return eps;
}

}  // namespace oracle
