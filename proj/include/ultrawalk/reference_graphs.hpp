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

// Quantum walks on the comparison graphs: cycle C_N, the line Z, the
// hypercube W_N and the complete graph K_N, each started at site 0.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ultrawalk/errors.hpp"
#include "ultrawalk/quadrature.hpp"
#include "ultrawalk/rational.hpp"

namespace ultrawalk {

struct CycleGraph {
  int n = 3;
};
struct LineGraph {};
struct HypercubeGraph {
  int n = 1;
};
struct CompleteGraph {
  int n = 2;
};

using GraphSpec = std::variant<CycleGraph, LineGraph, HypercubeGraph, CompleteGraph>;

inline void validate_graph(const GraphSpec& g) {
  if (const auto* c = std::get_if<CycleGraph>(&g); c && c->n < 3) {
    throw DomainError("cycle graph needs N >= 3");
  }
  if (const auto* h = std::get_if<HypercubeGraph>(&g); h && h->n < 1) {
    throw DomainError("hypercube needs N >= 1");
  }
  if (const auto* k = std::get_if<CompleteGraph>(&g); k && k->n < 2) {
    throw DomainError("complete graph needs N >= 2");
  }
}

// ---------------------------------------------------------------------------
// Cycle.

/// R_N(n): the excess weight at sites where 2n = 0 (mod N), and -1/2 or -1
/// (odd or even N) elsewhere.
inline Rational cycle_excess(int N, int n) {
  const bool resonant = (2 * static_cast<long long>(n)) % N == 0;
  if (resonant) return Rational(N % 2 == 1 ? (N - 1) / 2 : (N - 2) / 2);
  return N % 2 == 1 ? Rational(-1, 2) : Rational(-1);
}

/// 1/N + 2 R_N(n)/N^2 for n = 0..N-1.
inline std::vector<Rational> cycle_time_averaged_exact(int N) {
  validate_graph(CycleGraph{N});
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(N));
  const Rational inv(1, N);
  for (int n = 0; n < N; ++n) out.push_back(inv + 2 * cycle_excess(N, n) * inv * inv);
  return out;
}

inline std::vector<double> cycle_time_averaged(int N) {
  std::vector<double> out;
  for (const auto& r : cycle_time_averaged_exact(N)) out.push_back(to_double(r));
  return out;
}

/// Finite-horizon average of |<n| exp(itA) |0>|^2 from a numeric
/// diagonalisation of the cycle adjacency matrix (oracle).
inline std::vector<double> cycle_time_averaged_numeric(int N, double horizon, std::size_t steps) {
  validate_graph(CycleGraph{N});
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    a(i, (i + 1) % N) = 1.0;
    a((i + 1) % N, i) = 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  const Eigen::MatrixXd v = solver.eigenvectors();
  const Eigen::VectorXd lam = solver.eigenvalues();
  const Eigen::MatrixXcd vc = v.cast<std::complex<double>>();
  return trapezoid_mean_vector(
      [&](double t) {
        Eigen::VectorXcd c(N);
        for (int j = 0; j < N; ++j) c(j) = std::polar(1.0, t * lam(j)) * v(0, j);
        const Eigen::VectorXcd psi = vc * c;
        std::vector<double> prob(static_cast<std::size_t>(N));
        for (int n = 0; n < N; ++n) prob[n] = std::norm(psi(n));
        return prob;
      },
      horizon, steps);
}

// ---------------------------------------------------------------------------
// Bessel functions of the first kind and the line.

/// J_0(t) .. J_nmax(t) by Miller's backward recurrence
///   J_{k-1} = (2k/t) J_k - J_{k+1},
/// started far above max(nmax, t) and normalised with J_0 + 2 sum J_2k = 1.
inline std::vector<double> bessel_j_all(int nmax, double t) {
  if (nmax < 0) throw DomainError("Bessel order must be >= 0");
  if (!std::isfinite(t)) throw DomainError("Bessel argument must be finite");
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (t == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const double x = std::abs(t);
  const double top = std::max(static_cast<double>(nmax), x);
  int start = static_cast<int>(top + 20.0 + 2.0 * std::sqrt(40.0 * std::max(top, 1.0)));
  start += start % 2;  // even start keeps the normalisation sum aligned

  constexpr double kBig = 1e250;
  constexpr double kRescale = 1e-250;
  double above = 0.0;  // J_{k+1}
  double cur = 1e-300;  // J_k, arbitrary scale
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    if (k <= nmax) out[k] = cur;
    if (k % 2 == 0) norm += 2.0 * cur;
    const double below = (2.0 * k / x) * cur - above;
    above = cur;
    cur = below;
    if (std::abs(cur) > kBig) {
      cur *= kRescale;
      above *= kRescale;
      norm *= kRescale;
      for (int j = k; j <= nmax; ++j) out[j] *= kRescale;
    }
  }
  out[0] = cur;
  norm += cur;
  for (double& v : out) v /= norm;
  if (t < 0.0) {
    for (int k = 1; k <= nmax; k += 2) out[k] = -out[k];
  }
  return out;
}

/// J_n(t) for any integer order, using J_{-n} = (-1)^n J_n.
inline double bessel_j(int n, double t) {
  const int an = n < 0 ? -n : n;
  const double v = bessel_j_all(an, t)[static_cast<std::size_t>(an)];
  return (n < 0 && an % 2 == 1) ? -v : v;
}

/// Two-term large-t expansion
///   sqrt(2/(pi t)) [cos(t - theta) - sin(t - theta) (4n^2 - 1)/(8t)],
/// theta = (2n+1) pi/4, accurate to O(t^-5/2). Used as a test oracle.
inline double bessel_j_asymptotic(int n, double t) {
  const double theta = (2.0 * n + 1.0) * std::numbers::pi / 4.0;
  const double mu = 4.0 * n * n;
  return std::sqrt(2.0 / (std::numbers::pi * t)) *
         (std::cos(t - theta) - std::sin(t - theta) * (mu - 1.0) / (8.0 * t));
}

/// P(n, t) = J_n(t)^2 on Z.
inline double line_probability(long n, double t) {
  const double j = bessel_j(static_cast<int>(n), t);
  return j * j;
}

/// Default trapezoid resolution for line averages: 20 points per unit time.
inline std::size_t line_default_steps(double horizon) {
  return static_cast<std::size_t>(std::ceil(horizon * 20.0));
}

/// (1/T) int_0^T J_n(s)^2 ds for n = 0..nmax.
inline std::vector<double> line_time_average_all(int nmax, double horizon, std::size_t steps = 0) {
  if (steps == 0) steps = line_default_steps(horizon);
  return trapezoid_mean_vector(
      [nmax](double t) {
        std::vector<double> j = bessel_j_all(nmax, t);
        for (double& v : j) v *= v;
        return j;
      },
      horizon, steps);
}

inline double line_time_average(long n, double horizon, std::size_t steps = 0) {
  const int an = static_cast<int>(n < 0 ? -n : n);
  return line_time_average_all(an, horizon, steps)[static_cast<std::size_t>(an)];
}

// ---------------------------------------------------------------------------
// Hypercube.

/// cos(t/N)^(2(N-k)) sin(t/N)^(2k) for a site at Hamming weight k.
inline double hypercube_probability(int k, int N, double t) {
  validate_graph(HypercubeGraph{N});
  if (k < 0 || k > N) throw DomainError("Hamming weight outside [0, N]");
  const double c = std::cos(t / N);
  const double s = std::sin(t / N);
  return std::pow(c * c, N - k) * std::pow(s * s, k);
}

/// 2^-2N C(2k,k) C(2(N-k),N-k): the discrete arcsine weight of class V_k.
inline Rational hypercube_class_average(int k, int N) {
  validate_graph(HypercubeGraph{N});
  if (k < 0 || k > N) throw DomainError("Hamming weight outside [0, N]");
  const auto uk = static_cast<unsigned>(k);
  const auto un = static_cast<unsigned>(N);
  return Rational(binomial(2 * uk, uk) * binomial(2 * (un - uk), un - uk),
                  ipow(2, 2 * un));
}

/// Per-site average: the class average divided by C(N,k).
inline Rational hypercube_site_average(int k, int N) {
  return hypercube_class_average(k, N) /
         Rational(binomial(static_cast<unsigned>(N), static_cast<unsigned>(k)));
}

struct HypercubeAverages {
  std::vector<Rational> per_site;
  std::vector<Rational> per_class;
  std::vector<BigInt> class_sizes;
};

inline HypercubeAverages hypercube_time_averaged(int N) {
  validate_graph(HypercubeGraph{N});
  HypercubeAverages out;
  for (int k = 0; k <= N; ++k) {
    out.class_sizes.push_back(binomial(static_cast<unsigned>(N), static_cast<unsigned>(k)));
    out.per_class.push_back(hypercube_class_average(k, N));
    out.per_site.push_back(out.per_class.back() / Rational(out.class_sizes.back()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Complete graph.

/// ((N-1)^2 + 1 + 2(N-1) cos(Nt))/N^2 at the origin, 2(1 - cos(Nt))/N^2 elsewhere.
inline double complete_probability(bool at_origin, int N, double t) {
  validate_graph(CompleteGraph{N});
  const double n = N;
  const double c = std::cos(n * t);
  if (at_origin) return ((n - 1) * (n - 1) + 1 + 2 * (n - 1) * c) / (n * n);
  return 2.0 * (1.0 - c) / (n * n);
}

/// (average at the origin, average at any other site).
inline std::pair<Rational, Rational> complete_time_averaged(int N) {
  validate_graph(CompleteGraph{N});
  const Rational n2(static_cast<long long>(N) * N);
  return {Rational(static_cast<long long>(N - 1) * (N - 1) + 1) / n2, Rational(2) / n2};
}

}  // namespace ultrawalk
