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

#include <algorithm>
#include <numbers>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "dynlearn/dynamics.hpp"
#include "dynlearn/error.hpp"
#include "support.hpp"

using namespace dynlearn;
using namespace dynlearn::testing;
using Catch::Matchers::WithinAbs;

namespace {

// exp(-i H t) by eigendecomposition.
Matrix4c exact_unitary(const Matrix4c& ham, double t) {
  const auto eig = herm_eig(ham, 1e-12);
  Vector4c phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -eig.values(k) * t);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

Matrix4c exact_final(const Matrix4c& rho0, const ParamSchedule& s, UnitConvention units) {
  std::set<double> cuts{0.0, s.t_final()};
  for (ParamId p : kAllParams)
    for (std::size_t k = 0; k < s.segment_count(p); ++k) cuts.insert(s.segment_bounds(p, k).first);
  Matrix4c rho = rho0;
  for (auto it = cuts.begin(); std::next(it) != cuts.end(); ++it) {
    const double a = *it, b = *std::next(it);
    const Matrix4c u = exact_unitary(hamiltonian_at(s, units, 0.5 * (a + b)), b - a);
    rho = u * rho * u.adjoint();
  }
  return rho;
}

}  // namespace

TEST_CASE("schedule lookup is right-continuous and covers t_f") {
  ParamSchedule s(300.0);
  s.set(ParamId::EpsB, {1.0, 2.0, 3.0});
  CHECK(s.value_at(ParamId::EpsB, 0.0) == 1.0);
  CHECK(s.value_at(ParamId::EpsB, 99.999) == 1.0);
  CHECK(s.value_at(ParamId::EpsB, 100.0) == 2.0);
  CHECK(s.value_at(ParamId::EpsB, 300.0) == 3.0);
  CHECK(s.segment_index(ParamId::EpsB, 200.0) == 2);
  CHECK_THROWS_AS(s.value_at(ParamId::EpsB, 300.5), ValidationError);
  CHECK_THROWS_AS(s.value_at(ParamId::EpsB, -1.0), ValidationError);
  const auto [a, b] = s.segment_bounds(ParamId::EpsB, 1);
  CHECK(a == 100.0);
  CHECK(b == 200.0);
}

TEST_CASE("schedule validation") {
  ParamSchedule s(10.0);
  s.set(ParamId::KA, {std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(s.validate(), ValidationError);
  CHECK_THROWS_AS(ParamSchedule(-1.0).validate(), ValidationError);
  ParamSchedule empty(10.0);
  CHECK_THROWS_AS(empty.set(ParamId::KA, {}), ValidationError);
}

TEST_CASE("grid must tile t_f and every segment boundary") {
  ParamSchedule s(1000.0);
  s.set(ParamId::KA, {1, 2, 3, 4});
  CHECK(make_grid(s, 0.05).steps == 20000);
  CHECK_THROWS_AS(make_grid(s, 0.03), ValidationError);
  s.set(ParamId::KB, {1, 2, 3});
  CHECK_THROWS_AS(make_grid(s, 0.05), ValidationError);
  CHECK_THROWS_AS(make_grid(s, -0.05), ValidationError);
}

TEST_CASE("unit conventions differ by 2 pi") {
  CHECK(angular_factor(UnitConvention::RawMilli) == 1e-3);
  CHECK_THAT(angular_factor(UnitConvention::TwoPiMilli), WithinAbs(2e-3 * std::numbers::pi, 1e-18));
  CHECK(units_from_string("raw") == UnitConvention::RawMilli);
  CHECK(units_from_string("twopi") == UnitConvention::TwoPiMilli);
  CHECK_FALSE(units_from_string("hz").has_value());
  for (ParamId p : kAllParams) CHECK(param_from_string(to_string(p)) == p);
}

TEST_CASE("hamiltonian is Hermitian, traceless and real") {
  std::mt19937_64 rng(11);
  const ParamSchedule s = random_schedule(rng, 100.0, 5.0);
  const Matrix4c h = hamiltonian_at(s, UnitConvention::TwoPiMilli, 37.0);
  CHECK(is_hermitian(h, 1e-15));
  CHECK(std::abs(h.trace()) < 1e-15);
  CHECK(h.imag().norm() == 0.0);
}

TEST_CASE("diagonal Hamiltonian matches the closed-form phases") {
  ParamSchedule s(100.0);
  s.set_constant(ParamId::Zeta, 3.0);
  s.set_constant(ParamId::EpsB, -1.5);
  const Matrix4c rho0 = Matrix4c::Constant(0.25);
  const auto traj = evolve_rho(rho0, s, UnitConvention::RawMilli, 0.05);
  const Matrix4c h = hamiltonian_at(s, UnitConvention::RawMilli, 0.0);
  for (std::size_t n : {std::size_t(0), std::size_t(777), traj.size() - 1}) {
    const double t = 0.05 * static_cast<double>(n);
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        const auto expected =
            rho0(j, k) * std::polar(1.0, -(h(j, j).real() - h(k, k).real()) * t);
        CHECK(std::abs(traj[n](j, k) - expected) < 1e-10);
      }
  }
}

TEST_CASE("propagation conserves trace, hermiticity, purity and pairings") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const ParamSchedule s = random_schedule(rng, 1200.0, 10.0);
    const UnitConvention units = t % 2 ? UnitConvention::TwoPiMilli : UnitConvention::RawMilli;
    const Vector4c psi0 = random_ket(rng);
    const Matrix4c rho0 = projector(psi0);
    const auto rho = evolve_rho(rho0, s, units, 0.05);
    const Matrix4c lam_final = random_density(rng, 2) - random_density(rng, 3);
    const auto lam = evolve_adjoint_rho(lam_final, s, units, 0.05);
    const auto psi = evolve_ket(psi0, s, units, 0.05);
    const Vector4c mu_final = random_ket(rng);
    const auto mu = evolve_lambda_ket(mu_final, s, units, 0.05);
    const auto pair0 = trace_of_product(lam[0].transpose(), rho[0]);
    const auto ket_pair0 = mu[0].dot(psi[0]);
    for (std::size_t n = 0; n < rho.size(); n += 97) {
      CHECK(std::abs(rho[n].trace() - 1.0) < 1e-8);
      CHECK(hermiticity_defect(rho[n]) < 1e-8);
      CHECK(std::abs((rho[n] * rho[n]).trace() - 1.0) < 1e-8);
      CHECK(std::abs(psi[n].norm() - 1.0) < 1e-8);
      CHECK(std::abs(trace_of_product(lam[n].transpose(), rho[n]) - pair0) < 1e-8);
      CHECK(std::abs(mu[n].dot(psi[n]) - ket_pair0) < 1e-8);
    }
    // The ket and density pictures agree up to RK4 truncation; each is a
    // separate fourth-order discretization.
    CHECK((projector(psi.back()) - rho.back()).norm() < 1e-7);
  }
}

TEST_CASE("RK4 error falls by ~16 when the step halves") {
  ParamSchedule s(10.0);
  s.set_constant(ParamId::KA, 900.0);
  s.set_constant(ParamId::KB, -700.0);
  s.set_constant(ParamId::EpsA, 400.0);
  s.set_constant(ParamId::EpsB, 650.0);
  s.set_constant(ParamId::Zeta, 500.0);
  std::mt19937_64 rng(13);
  const Matrix4c rho0 = random_density(rng, 1);
  const Matrix4c exact = exact_final(rho0, s, UnitConvention::RawMilli);
  const double e1 = (evolve_rho(rho0, s, UnitConvention::RawMilli, 0.05).back() - exact).norm();
  const double e2 = (evolve_rho(rho0, s, UnitConvention::RawMilli, 0.025).back() - exact).norm();
  CHECK(e1 > 1e-12);
  const double ratio = e1 / e2;
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("piecewise propagation matches exact exponentials") {
  std::mt19937_64 rng(14);
  for (int t = 0; t < 5; ++t) {
    const ParamSchedule s = random_schedule(rng, 120.0, 10.0);
    const Matrix4c rho0 = random_density(rng, 2);
    const Matrix4c exact = exact_final(rho0, s, UnitConvention::TwoPiMilli);
    CHECK((evolve_rho(rho0, s, UnitConvention::TwoPiMilli, 0.05).back() - exact).norm() < 1e-8);
  }
}

TEST_CASE("rescaling weights and time leaves the evolution unchanged") {
  std::mt19937_64 rng(15);
  const ParamSchedule s = random_schedule(rng, 100.0, 20.0);
  const Matrix4c rho0 = random_density(rng, 2);
  const Matrix4c a = evolve_rho(rho0, s, UnitConvention::RawMilli, 0.05).back();
  const Matrix4c b = evolve_rho(rho0, s.rescaled(2.0), UnitConvention::RawMilli, 0.025).back();
  CHECK((a - b).norm() < 1e-12);
  // The 2 pi convention is the raw one with every weight scaled by 2 pi.
  const Matrix4c c = evolve_rho(rho0, s, UnitConvention::TwoPiMilli, 0.05).back();
  ParamSchedule manual(100.0);
  for (ParamId p : kAllParams) {
    std::vector<double> v(s.segments(p).begin(), s.segments(p).end());
    for (double& x : v) x *= 2.0 * std::numbers::pi;
    manual.set(p, v);
  }
  const Matrix4c d = evolve_rho(rho0, manual, UnitConvention::RawMilli, 0.05).back();
  CHECK((c - d).norm() < 1e-12);
}

TEST_CASE("adjoint trajectory ends at its terminal value") {
  std::mt19937_64 rng(16);
  const ParamSchedule s = random_schedule(rng, 50.0, 10.0);
  const Matrix4c lam = random_density(rng, 4);
  const auto traj = evolve_adjoint_rho(lam, s, UnitConvention::RawMilli, 0.05);
  CHECK(traj.back() == lam);
  CHECK(traj.size() == 1001);
}

TEST_CASE("propagators reject invalid inputs") {
  ParamSchedule s(10.0);
  Matrix4c bad = Matrix4c::Identity();
  CHECK_THROWS_AS(evolve_rho(bad, s, UnitConvention::RawMilli, 0.05), ValidationError);
  CHECK_THROWS_AS(evolve_ket(Vector4c::Constant(1.0), s, UnitConvention::RawMilli, 0.05),
                  ValidationError);
  Matrix4c nan = Matrix4c::Zero();
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(evolve_adjoint_rho(nan, s, UnitConvention::RawMilli, 0.05), ValidationError);
}

TEST_CASE("runaway integration is reported as a numerical error") {
  ParamSchedule s(100.0);
  s.set_constant(ParamId::KA, 1e7);
  s.set_constant(ParamId::Zeta, 3e7);
  Vector4c psi = Vector4c::Zero();
  psi(0) = 1.0;
  CHECK_THROWS_AS(evolve_rho(projector(psi), s, UnitConvention::RawMilli, 0.05), NumericalError);
  CHECK_THROWS_AS(evolve_ket(psi, s, UnitConvention::RawMilli, 0.05), NumericalError);
}
