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

// Dense linear algebra used only by the verification oracles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ultrawalk/errors.hpp"

namespace ultrawalk {

/// Largest matrix dimension the dense oracles will build.
inline constexpr std::size_t kDefaultDenseCap = 4096;

inline void check_dense_cap(std::uint64_t dim, std::size_t cap) {
  if (dim > cap) {
    throw ResourceError("dense matrix of dimension " + std::to_string(dim) +
                            " exceeds the dense cap " + std::to_string(cap) +
                            "; use the class-compressed closed forms instead",
                        cap);
  }
}

inline void check_symmetric(const Eigen::MatrixXd& h) {
  if (h.rows() != h.cols()) throw DomainError("matrix is not square");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("matrix is not symmetric");
  }
}

/// Ascending eigenvalues of a real symmetric matrix.
inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& h) {
  check_symmetric(h);
  if (h.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// exp(i t H) e_0 for real symmetric H, via full diagonalisation.
inline std::vector<std::complex<double>> unitary_column(const Eigen::MatrixXd& h, double t) {
  check_symmetric(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd& lam = solver.eigenvalues();
  Eigen::VectorXcd coeff(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) {
    coeff(j) = std::polar(1.0, t * lam(j)) * v(0, j);
  }
  const Eigen::VectorXcd psi = v.cast<std::complex<double>>() * coeff;
  return {psi.data(), psi.data() + psi.size()};
}

/// exp(t Q) e_0 for real symmetric Q, via full diagonalisation.
inline std::vector<double> semigroup_column(const Eigen::MatrixXd& q, double t) {
  check_symmetric(q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(q);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
  const Eigen::MatrixXd& v = solver.eigenvectors();
  const Eigen::VectorXd& lam = solver.eigenvalues();
  Eigen::VectorXd coeff(lam.size());
  for (Eigen::Index j = 0; j < lam.size(); ++j) coeff(j) = std::exp(t * lam(j)) * v(0, j);
  const Eigen::VectorXd col = v * coeff;
  return {col.data(), col.data() + col.size()};
}

}  // namespace ultrawalk
