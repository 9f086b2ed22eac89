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

// Dense complex linear algebra at fixed dimension 2 and 4.
//
// Everything here is a free function over Eigen fixed-size types, templated on
// the real scalar. The Hermitian eigensolver is a cyclic complex Jacobi
// iteration; at dimension 4 it converges in a handful of sweeps.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "dynlearn/error.hpp"

namespace dynlearn {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar, int N>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, N, N>;

template <typename Scalar>
using CMatrix2 = CMatrix<Scalar, 2>;

template <typename Scalar>
using CMatrix4 = CMatrix<Scalar, 4>;

/// Two-qubit ket in basis order |00>, |01>, |10>, |11> (first label = qubit A).
template <typename Scalar>
using CVector4 = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

using Matrix2c = CMatrix2<double>;
using Matrix4c = CMatrix4<double>;
using Vector4c = CVector4<double>;

enum class Pauli { I, X, Y, Z };

/// Single-qubit Pauli operator in (|0>, |1>) order.
///
/// Convention: sigma_z = diag(-1, +1), so logical 0 reads as -1. sigma_y is
/// fixed by sigma_x sigma_y sigma_z = i I.
template <typename Scalar = double>
CMatrix2<Scalar> pauli(Pauli which) {
  using C = Complex<Scalar>;
  CMatrix2<Scalar> m;
  switch (which) {
    case Pauli::I:
      m << C(1), C(0), C(0), C(1);
      break;
    case Pauli::X:
      m << C(0), C(1), C(1), C(0);
      break;
    case Pauli::Y:
      m << C(0), C(0, 1), C(0, -1), C(0);
      break;
    case Pauli::Z:
      m << C(-1), C(0), C(0), C(1);
      break;
  }
  return m;
}

/// Tensor product A (x) B with A acting on the left basis label.
template <typename DerivedA, typename DerivedB>
auto kron2(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedB::Scalar>,
                "kron2 operands must share a scalar type");
  static_assert(DerivedA::RowsAtCompileTime == Eigen::Dynamic ||
                    DerivedA::RowsAtCompileTime == 2,
                "kron2 expects 2x2 factors");
  static_assert(DerivedB::RowsAtCompileTime == Eigen::Dynamic ||
                    DerivedB::RowsAtCompileTime == 2,
                "kron2 expects 2x2 factors");
  if (a.rows() != 2 || a.cols() != 2 || b.rows() != 2 || b.cols() != 2) {
    throw ValidationError("kron2: both factors must be 2x2");
  }
  Eigen::Matrix<Scalar, 4, 4> out;
  // Element loops: block assignment of complex<float> products is miscompiled
  // by some GCC versions at -O3.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return out;
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Plain = typename DerivedA::PlainObject;
  const Plain ab = a * b;
  const Plain ba = b * a;
  return Plain(ab - ba);
}

template <typename Derived>
auto trace(const Eigen::MatrixBase<Derived>& m) {
  return m.trace();
}

/// Largest entry magnitude of M - M^dagger.
template <typename Derived>
typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  return hermiticity_defect(m) <= tol;
}

template <typename Scalar, int N>
struct HermitianEigen {
  /// Descending.
  Eigen::Matrix<Scalar, N, 1> values;
  /// Column k is the unit eigenvector for values(k).
  CMatrix<Scalar, N> vectors;
};

namespace detail {

template <typename Scalar>
Scalar jacobi_threshold() {
  return std::max(Scalar(1e-13), Scalar(16) * std::numeric_limits<Scalar>::epsilon());
}

template <typename Scalar, int N>
Scalar off_diagonal_norm(const CMatrix<Scalar, N>& a) {
  Scalar s = 0;
  for (int p = 0; p < N; ++p)
    for (int q = 0; q < N; ++q)
      if (p != q) s += std::norm(a(p, q));
  return std::sqrt(s);
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Throws ValidationError for non-Hermitian input and NumericalError when the
/// off-diagonal mass does not fall below threshold within 100 sweeps.
template <typename Derived>
auto herm_eig(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  using Scalar = typename Derived::RealScalar;
  constexpr int N = Derived::RowsAtCompileTime;
  static_assert(N != Eigen::Dynamic, "herm_eig works on fixed-size matrices");
  using C = Complex<Scalar>;
  using Mat = CMatrix<Scalar, N>;

  if (!is_hermitian(m, tol)) {
    throw ValidationError("herm_eig: matrix is not Hermitian (defect " +
                          std::to_string(double(hermiticity_defect(m))) + ")");
  }
  Mat a = (m + m.adjoint()) / Scalar(2);
  Mat v = Mat::Identity();
  const Scalar scale = std::max(Scalar(1), a.norm());
  const Scalar threshold = detail::jacobi_threshold<Scalar>() * scale;
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm<Scalar, N>(a) <= threshold) break;
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const Scalar mag = std::abs(a(p, q));
        if (mag <= std::numeric_limits<Scalar>::min()) continue;
        // a(p,q) = mag e^{i phi}; rotate the real symmetric core, then undo the phase.
        const C phase = a(p, q) / mag;
        const Scalar app = std::real(a(p, p));
        const Scalar aqq = std::real(a(q, q));
        const Scalar theta = (aqq - app) / (Scalar(2) * mag);
        const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                         (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
        const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
        const Scalar s = t * c;

        // Rotation J = [[c, s], [-s conj(phase), c conj(phase)]] on (p, q);
        // a <- J^dagger a J, v <- v J, applied column- and row-wise.
        const C jqp = -s * std::conj(phase);
        const C jqq = c * std::conj(phase);
        for (int r = 0; r < N; ++r) {
          const C arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp + jqp * arq;
          a(r, q) = s * arp + jqq * arq;
          const C vrp = v(r, p), vrq = v(r, q);
          v(r, p) = c * vrp + jqp * vrq;
          v(r, q) = s * vrp + jqq * vrq;
        }
        for (int col = 0; col < N; ++col) {
          const C apc = a(p, col), aqc = a(q, col);
          a(p, col) = c * apc + std::conj(jqp) * aqc;
          a(q, col) = s * apc + std::conj(jqq) * aqc;
        }
        a(p, q) = C(0);
        a(q, p) = C(0);
      }
    }
  }
  if (sweep == kMaxSweeps && detail::off_diagonal_norm<Scalar, N>(a) > threshold) {
    throw NumericalError("herm_eig: Jacobi iteration did not converge in 100 sweeps");
  }

  std::array<int, N> order;
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return std::real(a(x, x)) > std::real(a(y, y));
  });
  HermitianEigen<Scalar, N> out;
  for (int k = 0; k < N; ++k) {
    out.values(k) = std::real(a(order[k], order[k]));
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

/// Hermitian PSD square root. Eigenvalues below tol are round-off and become 0;
/// anything below -100 tol means the input was not PSD to begin with.
template <typename Derived>
auto psd_sqrt(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  using Scalar = typename Derived::RealScalar;
  constexpr int N = Derived::RowsAtCompileTime;
  const auto eig = herm_eig(m, tol);
  if (eig.values(N - 1) < -Scalar(100) * tol) {
    throw ValidationError("psd_sqrt: eigenvalue " + std::to_string(double(eig.values(N - 1))) +
                          " is significantly negative");
  }
  Eigen::Matrix<Scalar, N, 1> roots;
  for (int k = 0; k < N; ++k) {
    roots(k) = eig.values(k) < tol ? Scalar(0) : std::sqrt(eig.values(k));
  }
  CMatrix<Scalar, N> s = eig.vectors * roots.template cast<Complex<Scalar>>().asDiagonal() *
                         eig.vectors.adjoint();
  return CMatrix<Scalar, N>((s + s.adjoint()) / Scalar(2));
}

/// Hermitian, unit trace, and no eigenvalue below -tol.
template <typename Derived>
bool is_density(const Eigen::MatrixBase<Derived>& m, typename Derived::RealScalar tol) {
  using Scalar = typename Derived::RealScalar;
  if (!m.allFinite() || !is_hermitian(m, tol)) return false;
  if (std::abs(m.trace() - Complex<Scalar>(1)) > tol) return false;
  try {
    const auto eig = herm_eig(m, tol);
    return eig.values(Derived::RowsAtCompileTime - 1) >= -tol;
  } catch (const NumericalError&) {
    return false;
  }
}

/// Projector |psi><psi| of the normalized ket.
template <typename Derived>
auto projector(const Eigen::MatrixBase<Derived>& psi) {
  using Plain = typename Derived::PlainObject;
  const Plain unit = psi.normalized();
  return Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime,
                       Derived::RowsAtCompileTime>(unit * unit.adjoint());
}

/// tr(A B) without forming the product.
template <typename DerivedA, typename DerivedB>
auto trace_of_product(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace dynlearn
