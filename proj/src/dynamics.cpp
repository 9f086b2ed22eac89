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

#include "dynlearn/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dynlearn {

namespace {

constexpr std::array<std::string_view, kParamCount> kParamNames = {"KA", "KB", "EpsA", "EpsB",
                                                                   "Zeta"};

// Relative slack when deciding whether a time sits on the grid.
constexpr double kGridSlack = 1e-9;

std::array<Matrix4c, kParamCount> build_generators() {
  const Matrix2c id = pauli(Pauli::I);
  const Matrix2c sx = pauli(Pauli::X);
  const Matrix2c sz = pauli(Pauli::Z);
  return {kron2(sx, id), kron2(id, sx), kron2(sz, id), kron2(id, sz), kron2(sz, sz)};
}

std::size_t checked_ratio(double numerator, double denominator, const char* what) {
  const double ratio = numerator / denominator;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > kGridSlack * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << what << ": " << numerator << " is not a positive integer multiple of " << denominator;
    throw ValidationError(msg.str());
  }
  return static_cast<std::size_t>(rounded);
}

void require_time_in_range(const ParamSchedule& schedule, double t) {
  const double slack = kGridSlack * std::max(1.0, schedule.t_final());
  if (!(t >= -slack && t <= schedule.t_final() + slack)) {
    std::ostringstream msg;
    msg << "time " << t << " outside [0, " << schedule.t_final() << "]";
    throw ValidationError(msg.str());
  }
}

Matrix4c hamiltonian_from_values(const std::array<double, kParamCount>& values, double factor) {
  Matrix4c h = Matrix4c::Zero();
  for (ParamId p : kAllParams) {
    const double v = values[index_of(p)];
    if (v != 0.0) h += (factor * v) * generator(p);
  }
  return h;
}

// One RK4 step of a linear equation with a step-constant generator is itself a
// fixed linear map. It is built once per distinct generator by pushing basis
// states through rk4_step, then applied as a matrix product.

// Hermitian 4x4 matrices packed as 16 reals: the diagonal, then Re/Im of the
// strict upper triangle.
using Packed = Eigen::Matrix<double, 16, 1>;
using PackedMap = Eigen::Matrix<double, 16, 16>;

constexpr std::array<std::pair<int, int>, 6> kUpper = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

Packed pack(const Matrix4c& m) {
  Packed v;
  for (int k = 0; k < 4; ++k) v(k) = m(k, k).real();
  for (int q = 0; q < 6; ++q) {
    const auto [i, j] = kUpper[q];
    v(4 + 2 * q) = m(i, j).real();
    v(5 + 2 * q) = m(i, j).imag();
  }
  return v;
}

Matrix4c unpack(const Packed& v) {
  Matrix4c m;
  for (int k = 0; k < 4; ++k) m(k, k) = v(k);
  for (int q = 0; q < 6; ++q) {
    const auto [i, j] = kUpper[q];
    m(i, j) = std::complex<double>(v(4 + 2 * q), v(5 + 2 * q));
    m(j, i) = std::conj(m(i, j));
  }
  return m;
}

// X' = -i [K, X] with K Hermitian maps Hermitian matrices to Hermitian ones.
PackedMap commutator_step_map(const Matrix4c& k, double h) {
  const std::complex<double> minus_i(0.0, -1.0);
  const auto deriv = [&](const Matrix4c& x) -> Matrix4c { return minus_i * (k * x - x * k); };
  PackedMap map;
  for (int c = 0; c < 16; ++c) {
    Packed e = Packed::Zero();
    e(c) = 1.0;
    map.col(c) = pack(rk4_step(unpack(e), h, deriv));
  }
  return map;
}

Matrix4c linear_step_map(const Matrix4c& gen, double h) {
  Matrix4c map;
  for (int c = 0; c < 4; ++c) {
    map.col(c) = rk4_step(Vector4c(Vector4c::Unit(c)), h,
                          [&](const Vector4c& y) -> Vector4c { return gen * y; });
  }
  return map;
}

// Runs the grid, forward or in t' = t_f - t, rebuilding the step map only when
// the step generator changes.
template <typename State, typename Map, typename GenForStep, typename BuildMap, typename Apply,
          typename Check>
Trajectory<State> integrate(const State& y0, const TimeGrid& grid, bool backward,
                            GenForStep&& gen_for_step, BuildMap&& build_map, Apply&& apply,
                            Check&& check) {
  Trajectory<State> out;
  out.h = grid.h;
  out.states.resize(grid.size());
  const std::size_t last = grid.steps;
  out.states[backward ? last : 0] = y0;
  State y = y0;
  Matrix4c current_gen;
  Map map;
  bool have_map = false;
  for (std::size_t m = 0; m < grid.steps; ++m) {
    // Forward: interval [t_m, t_{m+1}). Backward: interval [t_{N-m-1}, t_{N-m}).
    const std::size_t interval = backward ? last - m - 1 : m;
    const Matrix4c gen = gen_for_step(interval);
    if (!have_map || gen != current_gen) {
      map = build_map(gen);
      current_gen = gen;
      have_map = true;
    }
    y = apply(map, y);
    const std::size_t slot = backward ? interval : m + 1;
    check(y, slot);
    out.states[slot] = y;
  }
  return out;
}

template <typename GenForStep, typename Check>
RhoTrajectory integrate_hermitian(const Matrix4c& x0, const TimeGrid& grid, bool backward,
                                  GenForStep&& gen_for_step, Check&& check) {
  const Trajectory<Packed> packed = integrate<Packed, PackedMap>(
      pack(x0), grid, backward, gen_for_step,
      [&](const Matrix4c& k) { return commutator_step_map(k, grid.h); },
      [](const PackedMap& map, const Packed& y) -> Packed { return map * y; },
      [&](const Packed& y, std::size_t slot) { check(y, slot); });
  RhoTrajectory out;
  out.h = packed.h;
  out.states.reserve(packed.size());
  for (const Packed& v : packed.states) out.states.push_back(unpack(v));
  return out;
}

// X' = -i [K_n, X] for arbitrary X: the Hermitian and anti-Hermitian parts
// evolve independently under the same real-linear map.
template <typename GenForStep, typename Check>
RhoTrajectory integrate_operator(const Matrix4c& x0, const TimeGrid& grid, bool backward,
                                 GenForStep&& gen_for_step, Check&& check) {
  const Matrix4c herm = 0.5 * (x0 + x0.adjoint());
  const Matrix4c anti = 0.5 * (x0 - x0.adjoint());
  RhoTrajectory out = integrate_hermitian(herm, grid, backward, gen_for_step, check);
  if (anti.cwiseAbs().maxCoeff() == 0.0) return out;
  const std::complex<double> i(0.0, 1.0);
  const RhoTrajectory im = integrate_hermitian(Matrix4c(-i * anti), grid, backward, gen_for_step,
                                               [](const Packed&, std::size_t) {});
  for (std::size_t n = 0; n < out.size(); ++n) out.states[n] += i * im.states[n];
  return out;
}

template <typename GenForStep, typename Check>
KetTrajectory integrate_ket(const Vector4c& y0, const TimeGrid& grid, bool backward,
                            GenForStep&& gen_for_step, Check&& check) {
  return integrate<Vector4c, Matrix4c>(
      y0, grid, backward, gen_for_step,
      [&](const Matrix4c& gen) { return linear_step_map(gen, grid.h); },
      [](const Matrix4c& map, const Vector4c& y) -> Vector4c { return map * y; }, check);
}

}  // namespace

std::string_view to_string(ParamId p) { return kParamNames[index_of(p)]; }

std::optional<ParamId> param_from_string(std::string_view name) {
  for (ParamId p : kAllParams) {
    if (kParamNames[index_of(p)] == name) return p;
  }
  return std::nullopt;
}

double angular_factor(UnitConvention units) {
  switch (units) {
    case UnitConvention::RawMilli:
      return 1e-3;
    case UnitConvention::TwoPiMilli:
      return 2.0 * std::numbers::pi * 1e-3;
  }
  return 1e-3;
}

std::string_view to_string(UnitConvention units) {
  return units == UnitConvention::RawMilli ? "raw" : "twopi";
}

std::optional<UnitConvention> units_from_string(std::string_view name) {
  if (name == "raw") return UnitConvention::RawMilli;
  if (name == "twopi") return UnitConvention::TwoPiMilli;
  return std::nullopt;
}

ParamSchedule::ParamSchedule(double t_final) : t_final_(t_final) {
  for (auto& v : values_) v = {0.0};
  trainable_.fill(true);
}

void ParamSchedule::set(ParamId p, std::vector<double> segment_values, bool trainable) {
  if (segment_values.empty()) {
    throw ValidationError("parameter " + std::string(to_string(p)) + " needs at least one segment");
  }
  values_[index_of(p)] = std::move(segment_values);
  trainable_[index_of(p)] = trainable;
}

std::size_t ParamSchedule::segment_index(ParamId p, double t) const {
  require_time_in_range(*this, t);
  const std::size_t count = segment_count(p);
  const double position = t / t_final_ * static_cast<double>(count);
  // Snap times that sit on a boundary up to the next segment (right-continuity).
  const double snapped = std::floor(position + kGridSlack * std::max(1.0, position));
  const auto k = static_cast<std::size_t>(std::max(0.0, snapped));
  return std::min(k, count - 1);
}

double ParamSchedule::value_at(ParamId p, double t) const {
  return values_[index_of(p)][segment_index(p, t)];
}

std::pair<double, double> ParamSchedule::segment_bounds(ParamId p, std::size_t k) const {
  const double width = t_final_ / static_cast<double>(segment_count(p));
  return {static_cast<double>(k) * width, static_cast<double>(k + 1) * width};
}

ParamSchedule ParamSchedule::rescaled(double s) const {
  ParamSchedule out = *this;
  out.t_final_ = t_final_ / s;
  for (auto& seg : out.values_)
    for (double& v : seg) v *= s;
  return out;
}

SegmentTable ParamSchedule::zeros_like() const {
  SegmentTable z;
  for (std::size_t i = 0; i < kParamCount; ++i) z[i].assign(values_[i].size(), 0.0);
  return z;
}

void ParamSchedule::validate() const {
  if (!(std::isfinite(t_final_) && t_final_ > 0.0)) {
    throw ValidationError("schedule final time must be positive and finite");
  }
  for (ParamId p : kAllParams) {
    const auto& seg = values_[index_of(p)];
    if (seg.empty()) {
      throw ValidationError("parameter " + std::string(to_string(p)) + " has no segments");
    }
    for (double v : seg) {
      if (!std::isfinite(v)) {
        throw ValidationError("parameter " + std::string(to_string(p)) + " has a non-finite value");
      }
    }
  }
}

TimeGrid make_grid(const ParamSchedule& schedule, double h) {
  schedule.validate();
  if (!(std::isfinite(h) && h > 0.0)) throw ValidationError("step size must be positive");
  TimeGrid grid{h, checked_ratio(schedule.t_final(), h, "final time")};
  for (ParamId p : kAllParams) {
    const std::size_t count = schedule.segment_count(p);
    if (grid.steps % count != 0) {
      std::ostringstream msg;
      msg << "parameter " << to_string(p) << ": " << count << " segments do not align with "
          << grid.steps << " integration steps";
      throw ValidationError(msg.str());
    }
  }
  return grid;
}

std::pair<std::size_t, std::size_t> segment_grid_range(const ParamSchedule& schedule, ParamId p,
                                                       std::size_t k, const TimeGrid& grid) {
  const std::size_t per = grid.steps / schedule.segment_count(p);
  return {k * per, (k + 1) * per};
}

const Matrix4c& generator(ParamId p) {
  static const std::array<Matrix4c, kParamCount> generators = build_generators();
  return generators[index_of(p)];
}

Matrix4c hamiltonian_at(const ParamSchedule& schedule, UnitConvention units, double t) {
  require_time_in_range(schedule, t);
  std::array<double, kParamCount> values{};
  for (ParamId p : kAllParams) values[index_of(p)] = schedule.value_at(p, t);
  return hamiltonian_from_values(values, angular_factor(units));
}

Matrix4c step_hamiltonian(const ParamSchedule& schedule, UnitConvention units,
                          const TimeGrid& grid, std::size_t n) {
  std::array<double, kParamCount> values{};
  for (ParamId p : kAllParams) {
    const std::size_t per = grid.steps / schedule.segment_count(p);
    values[index_of(p)] = schedule.value(p, n / per);
  }
  return hamiltonian_from_values(values, angular_factor(units));
}

RhoTrajectory evolve_rho(const Matrix4c& rho0, const ParamSchedule& schedule,
                         UnitConvention units, double h) {
  if (!is_density(rho0, 1e-9)) throw ValidationError("evolve_rho: initial state is not a density matrix");
  const TimeGrid grid = make_grid(schedule, h);
  return integrate_hermitian(
      rho0, grid, false, [&](std::size_t n) { return step_hamiltonian(schedule, units, grid, n); },
      [&](const Packed& rho, std::size_t n) {
        const double drift = std::abs(rho.head<4>().sum() - 1.0);
        if (!(drift <= 1e-6)) {
          std::ostringstream msg;
          msg << "evolve_rho: trace drifted by " << drift << " at t = " << grid.time(n)
              << "; step size too large for these parameter magnitudes";
          throw NumericalError(msg.str());
        }
      });
}

RhoTrajectory evolve_operator(const Matrix4c& x0, const ParamSchedule& schedule,
                              UnitConvention units, double h) {
  if (!x0.allFinite()) throw ValidationError("evolve_operator: non-finite initial value");
  const TimeGrid grid = make_grid(schedule, h);
  return integrate_operator(
      x0, grid, false, [&](std::size_t n) { return step_hamiltonian(schedule, units, grid, n); },
      [](const Packed& x, std::size_t) {
        if (!x.allFinite()) throw NumericalError("evolve_operator: non-finite state");
      });
}

KetTrajectory evolve_ket(const Vector4c& psi0, const ParamSchedule& schedule, UnitConvention units,
                         double h) {
  if (!psi0.allFinite() || std::abs(psi0.norm() - 1.0) > 1e-9) {
    throw ValidationError("evolve_ket: initial ket is not normalized");
  }
  const TimeGrid grid = make_grid(schedule, h);
  const std::complex<double> minus_i(0.0, -1.0);
  return integrate_ket(
      psi0, grid, false,
      [&](std::size_t n) -> Matrix4c { return minus_i * step_hamiltonian(schedule, units, grid, n); },
      [&](const Vector4c& psi, std::size_t n) {
        const double drift = std::abs(psi.norm() - 1.0);
        if (!(drift <= 1e-6)) {
          std::ostringstream msg;
          msg << "evolve_ket: norm drifted by " << drift << " at t = " << grid.time(n);
          throw NumericalError(msg.str());
        }
      });
}

RhoTrajectory evolve_adjoint_rho(const Matrix4c& lambda_final, const ParamSchedule& schedule,
                                 UnitConvention units, double h) {
  if (!lambda_final.allFinite()) throw ValidationError("evolve_adjoint_rho: non-finite terminal value");
  const TimeGrid grid = make_grid(schedule, h);
  // In t' the equation reads dLambda/dt' = -i [H^T, Lambda].
  return integrate_operator(
      lambda_final, grid, true,
      [&](std::size_t n) -> Matrix4c {
        return step_hamiltonian(schedule, units, grid, n).transpose();
      },
      [](const Packed& lam, std::size_t) {
        if (!lam.allFinite()) throw NumericalError("evolve_adjoint_rho: non-finite multiplier");
      });
}

KetTrajectory evolve_lambda_ket(const Vector4c& lambda_final, const ParamSchedule& schedule,
                                UnitConvention units, double h) {
  if (!lambda_final.allFinite()) throw ValidationError("evolve_lambda_ket: non-finite terminal value");
  const TimeGrid grid = make_grid(schedule, h);
  const std::complex<double> plus_i(0.0, 1.0);
  // In t' the equation reads dlambda/dt' = +i H* lambda.
  return integrate_ket(
      lambda_final, grid, true,
      [&](std::size_t n) -> Matrix4c {
        return plus_i * step_hamiltonian(schedule, units, grid, n).conjugate();
      },
      [](const Vector4c& lam, std::size_t) {
        if (!lam.allFinite()) throw NumericalError("evolve_lambda_ket: non-finite multiplier");
      });
}

}  // namespace dynlearn
