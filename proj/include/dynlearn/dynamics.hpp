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

// Two-qubit Hamiltonian with piecewise-constant trainable parameters, and
// fixed-step RK4 propagation of states and their adjoints.
//
//   H(t) = w KA sx_A + w KB sx_B + w EpsA sz_A + w EpsB sz_B + w Zeta sz_A sz_B
//
// with w the unit-conversion factor applied to the stored values.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dynlearn/qcore.hpp"

namespace dynlearn {

enum class ParamId { KA, KB, EpsA, EpsB, Zeta };

inline constexpr std::size_t kParamCount = 5;
inline constexpr std::array<ParamId, kParamCount> kAllParams = {
    ParamId::KA, ParamId::KB, ParamId::EpsA, ParamId::EpsB, ParamId::Zeta};

constexpr std::size_t index_of(ParamId p) { return static_cast<std::size_t>(p); }

std::string_view to_string(ParamId p);
std::optional<ParamId> param_from_string(std::string_view name);

/// How stored parameter values map to angular frequency per time unit.
///   RawMilli:   omega = v * 1e-3
///   TwoPiMilli: omega = 2 pi v * 1e-3
enum class UnitConvention { RawMilli, TwoPiMilli };

double angular_factor(UnitConvention units);
std::string_view to_string(UnitConvention units);
std::optional<UnitConvention> units_from_string(std::string_view name);

/// One real value per (parameter, segment). Used for schedule values and for
/// gradients with the same shape.
using SegmentTable = std::array<std::vector<double>, kParamCount>;

/// Piecewise-constant values for the five Hamiltonian parameters over [0, t_f].
///
/// Parameter p with S segments holds segment k on [k t_f / S, (k+1) t_f / S);
/// lookups are right-continuous and t_f itself falls in the last segment.
class ParamSchedule {
 public:
  ParamSchedule() : ParamSchedule(1.0) {}
  explicit ParamSchedule(double t_final);

  double t_final() const { return t_final_; }

  void set(ParamId p, std::vector<double> segment_values, bool trainable = true);
  void set_constant(ParamId p, double value, bool trainable = true) { set(p, {value}, trainable); }
  void set_trainable(ParamId p, bool trainable) { trainable_[index_of(p)] = trainable; }

  std::span<const double> segments(ParamId p) const { return values_[index_of(p)]; }
  std::size_t segment_count(ParamId p) const { return values_[index_of(p)].size(); }
  bool trainable(ParamId p) const { return trainable_[index_of(p)]; }
  double& value(ParamId p, std::size_t segment) { return values_[index_of(p)].at(segment); }
  double value(ParamId p, std::size_t segment) const { return values_[index_of(p)].at(segment); }
  const SegmentTable& table() const { return values_; }

  std::size_t segment_index(ParamId p, double t) const;
  double value_at(ParamId p, double t) const;
  /// [start, end) of segment k.
  std::pair<double, double> segment_bounds(ParamId p, std::size_t k) const;

  /// All values multiplied by s and t_f divided by s.
  ParamSchedule rescaled(double s) const;

  /// Zeros with this schedule's shape.
  SegmentTable zeros_like() const;

  /// Throws ValidationError on non-finite values, empty parameters or t_f <= 0.
  void validate() const;

  friend bool operator==(const ParamSchedule&, const ParamSchedule&) = default;

 private:
  double t_final_;
  SegmentTable values_;
  std::array<bool, kParamCount> trainable_{};
};

/// Uniform integration grid t_n = n h, n = 0..steps.
struct TimeGrid {
  double h = 0.05;
  std::size_t steps = 0;

  double time(std::size_t n) const { return static_cast<double>(n) * h; }
  std::size_t size() const { return steps + 1; }
};

/// Grid for the schedule at step h. Throws ValidationError unless t_f is an
/// integer multiple of h and every segment boundary lands on a grid point.
TimeGrid make_grid(const ParamSchedule& schedule, double h);

/// Grid index of the first and last point of segment k of p.
std::pair<std::size_t, std::size_t> segment_grid_range(const ParamSchedule& schedule, ParamId p,
                                                       std::size_t k, const TimeGrid& grid);

/// States at t = 0, h, ..., t_f, always stored in forward time order, including
/// adjoint quantities that were integrated backwards.
template <typename State>
struct Trajectory {
  double h = 0.0;
  std::vector<State> states;

  std::size_t size() const { return states.size(); }
  double t_final() const { return h * static_cast<double>(states.empty() ? 0 : states.size() - 1); }
  const State& front() const { return states.front(); }
  const State& back() const { return states.back(); }
  const State& operator[](std::size_t n) const { return states[n]; }
};

using RhoTrajectory = Trajectory<Matrix4c>;
using KetTrajectory = Trajectory<Vector4c>;

/// sx_A, sx_B, sz_A, sz_B or sz_A sz_B.
const Matrix4c& generator(ParamId p);

/// Throws ValidationError if t lies outside [0, t_f].
Matrix4c hamiltonian_at(const ParamSchedule& schedule, UnitConvention units, double t);

/// Hamiltonian held over step [t_n, t_n + h).
Matrix4c step_hamiltonian(const ParamSchedule& schedule, UnitConvention units,
                          const TimeGrid& grid, std::size_t n);

/// Classical four-stage Runge-Kutta step for y' = f(y).
template <typename State, typename Deriv>
State rk4_step(const State& y, double h, Deriv&& f) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * h) * k1));
  const State k3 = f(State(y + (0.5 * h) * k2));
  const State k4 = f(State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

/// drho/dt = -i [H(t), rho]. Requires a density matrix (tol 1e-9); throws
/// NumericalError when |tr rho - 1| drifts past 1e-6.
RhoTrajectory evolve_rho(const Matrix4c& rho0, const ParamSchedule& schedule,
                         UnitConvention units, double h);

/// Same equation for an arbitrary operator (e.g. a weighted sum of densities),
/// without density checks.
RhoTrajectory evolve_operator(const Matrix4c& x0, const ParamSchedule& schedule,
                              UnitConvention units, double h);

/// dpsi/dt = -i H(t) psi for a unit ket; throws NumericalError on norm drift
/// past 1e-6.
KetTrajectory evolve_ket(const Vector4c& psi0, const ParamSchedule& schedule,
                         UnitConvention units, double h);

/// Multiplier matrix Lambda (Lambda_ij = lambda_i gamma_j) obeying
/// dLambda/dt = i [H^T(t), Lambda], integrated from t_f back to 0 by stepping
/// forward in t' = t_f - t. tr(Lambda^T rho) is conserved along a matching
/// forward trajectory.
RhoTrajectory evolve_adjoint_rho(const Matrix4c& lambda_final, const ParamSchedule& schedule,
                                 UnitConvention units, double h);

/// Ket multiplier obeying dlambda/dt = -i H*(t) lambda, from t_f back to 0.
KetTrajectory evolve_lambda_ket(const Vector4c& lambda_final, const ParamSchedule& schedule,
                                UnitConvention units, double h);

/// Throws ValidationError unless both trajectories share step and length.
template <typename A, typename B>
void require_matching(const Trajectory<A>& forward, const Trajectory<B>& backward) {
  if (forward.size() != backward.size() || forward.h != backward.h) {
    throw ValidationError("trajectory grids do not match (" + std::to_string(forward.size()) +
                          " vs " + std::to_string(backward.size()) + " points)");
  }
}

}  // namespace dynlearn
