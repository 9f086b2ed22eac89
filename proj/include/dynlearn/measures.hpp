// Copyright 2026 The dynlearn Authors
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

// Reference entanglement quantities for two qubits.

#include <algorithm>
#include <limits>
#include <cmath>

#include "dynlearn/qcore.hpp"

namespace dynlearn {

namespace detail {

/// 1e-9 in double precision, scaled up for coarser scalars.
template <typename Scalar>
Scalar density_tol() {
  return std::max(Scalar(1e-9), Scalar(1000) * std::numeric_limits<Scalar>::epsilon());
}

template <typename Derived>
void require_density(const Eigen::MatrixBase<Derived>& rho, const char* what) {
  if (!is_density(rho, density_tol<typename Derived::RealScalar>())) {
    throw ValidationError(std::string(what) + ": input is not a density matrix");
  }
}

template <typename Scalar>
const CMatrix4<Scalar>& sigma_yy() {
  static const CMatrix4<Scalar> yy = kron2(pauli<Scalar>(Pauli::Y), pauli<Scalar>(Pauli::Y));
  return yy;
}

}  // namespace detail

/// <sz_A sz_B>^2.
template <typename Derived>
typename Derived::RealScalar correlation_sq(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  detail::require_density(rho, "correlation_sq");
  const auto zz = kron2(pauli<Scalar>(Pauli::Z), pauli<Scalar>(Pauli::Z));
  const Scalar c = std::real(trace_of_product(rho, zz));
  return c * c;
}

/// (sy (x) sy) rho* (sy (x) sy).
template <typename Derived>
auto spin_flip(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  const auto& yy = detail::sigma_yy<Scalar>();
  return CMatrix4<Scalar>(yy * rho.conjugate() * yy);
}

/// Wootters concurrence max(0, s1 - s2 - s3 - s4), with s the descending
/// eigenvalues of sqrt(sqrt(rho) rho~ sqrt(rho)).
template <typename Derived>
typename Derived::RealScalar concurrence(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  detail::require_density(rho, "concurrence");
  const auto rho_eig = herm_eig(CMatrix4<Scalar>(rho), detail::density_tol<Scalar>());
  Eigen::Matrix<Scalar, 4, 1> root_values;
  for (int k = 0; k < 4; ++k) root_values(k) = std::sqrt(std::max(Scalar(0), rho_eig.values(k)));
  const CMatrix4<Scalar> root =
      rho_eig.vectors * root_values.template cast<Complex<Scalar>>().asDiagonal() *
      rho_eig.vectors.adjoint();
  const CMatrix4<Scalar> sandwich = root * spin_flip(rho) * root;
  const CMatrix4<Scalar> sym = (sandwich + sandwich.adjoint()) / Scalar(2);
  const auto eig = herm_eig(sym, detail::density_tol<Scalar>());
  // Eigenvalues at round-off level are zeroed before the square root, where
  // they would otherwise be amplified to ~1e-8.
  const Scalar floor = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  Eigen::Matrix<Scalar, 4, 1> s;
  for (int k = 0; k < 4; ++k) s(k) = eig.values(k) < floor ? Scalar(0) : std::sqrt(eig.values(k));
  return std::max(Scalar(0), s(0) - s(1) - s(2) - s(3));
}

/// -x log2 x - (1-x) log2(1-x), zero at both endpoints.
template <typename Scalar>
Scalar binary_entropy(Scalar x) {
  if (x <= Scalar(0) || x >= Scalar(1)) return Scalar(0);
  return -x * std::log2(x) - (Scalar(1) - x) * std::log2(Scalar(1) - x);
}

template <typename Scalar>
Scalar eof_from_concurrence(Scalar c) {
  c = std::clamp(c, Scalar(0), Scalar(1));
  return binary_entropy((Scalar(1) + std::sqrt(Scalar(1) - c * c)) / Scalar(2));
}

/// Entanglement of formation.
template <typename Derived>
typename Derived::RealScalar eof(const Eigen::MatrixBase<Derived>& rho) {
  return eof_from_concurrence(concurrence(rho));
}

/// tr(rho rho~) / tr(rho^2). Equals tr(rho rho~) on pure states; the purity
/// normalization puts the even mixture of |00> and |11> at 1.
template <typename Derived>
typename Derived::RealScalar spin_flip_overlap(const Eigen::MatrixBase<Derived>& rho) {
  detail::require_density(rho, "spin_flip_overlap");
  const auto overlap = std::real(trace_of_product(rho, spin_flip(rho)));
  return overlap / std::real(trace_of_product(rho, rho));
}

/// tr(rho (I - sx_A sx_B - sz_A sz_B)); negative values flag entanglement.
template <typename Derived>
typename Derived::RealScalar tg_witness(const Eigen::MatrixBase<Derived>& rho) {
  using Scalar = typename Derived::RealScalar;
  detail::require_density(rho, "tg_witness");
  static const CMatrix4<Scalar> w =
      CMatrix4<Scalar>::Identity() -
      kron2(pauli<Scalar>(Pauli::X), pauli<Scalar>(Pauli::X)) -
      kron2(pauli<Scalar>(Pauli::Z), pauli<Scalar>(Pauli::Z));
  return std::real(trace_of_product(rho, w));
}

template <typename Scalar>
struct MeasureReport {
  Scalar correlation_sq = 0;
  Scalar concurrence = 0;
  Scalar eof = 0;
  Scalar spin_flip_overlap = 0;
  Scalar tg_witness = 0;
};

template <typename Derived>
MeasureReport<typename Derived::RealScalar> measure_all(const Eigen::MatrixBase<Derived>& rho) {
  MeasureReport<typename Derived::RealScalar> r;
  r.correlation_sq = correlation_sq(rho);
  r.concurrence = concurrence(rho);
  r.eof = eof_from_concurrence(r.concurrence);
  r.spin_flip_overlap = spin_flip_overlap(rho);
  r.tg_witness = tg_witness(rho);
  return r;
}

}  // namespace dynlearn
