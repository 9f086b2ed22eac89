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

// Dynamic learning in the density-matrix picture.
//
// Loss per pair is 1/2 (d - output)^2 with output = g(tr(rho(t_f) O)). The
// multiplier matrix starts at Lambda(t_f) = (d - output) g'(x) O^T, runs
// backwards, and the weight gradient is
//
//   dL/dw = i * integral tr(Lambda^T [dH/dw, rho]) dt
//
// evaluated by trapezoid quadrature on the shared RK4 grid.

#include <vector>

#include "dynlearn/descent.hpp"
#include "dynlearn/dynamics.hpp"

namespace dynlearn {

enum class ObservableKind { Linear, Squared };

struct Observable {
  ObservableKind kind = ObservableKind::Linear;
  Matrix4c op = Matrix4c::Identity();

  /// Re tr(rho O).
  double expectation(const Matrix4c& rho) const;
  /// x for Linear, x^2 for Squared.
  double output_from(double expectation) const;
  /// d output / d expectation.
  double chain_factor(double expectation) const;
  double output(const Matrix4c& rho) const { return output_from(expectation(rho)); }
};

/// sigma_zB, read linearly: the logic-gate output.
Observable gate_observable();
/// [tr(rho sigma_zA sigma_zB)]^2: the witness output.
Observable witness_observable();

struct RhoTrainingPair {
  Matrix4c rho0;
  double target = 0.0;
};

struct ForwardResult {
  double output = 0.0;
  double expectation = 0.0;
  RhoTrajectory trajectory;
};

ForwardResult forward_output(const RhoTrainingPair& pair, const ParamSchedule& schedule,
                             const Observable& obs, UnitConvention units, double h);

/// Lambda(t_f) = (d - output) g'(x) O^T, with x = tr(rho(t_f) O).
Matrix4c terminal_lambda(double expectation, double target, const Observable& obs);

struct GradientResult {
  double output = 0.0;
  double loss = 0.0;
  SegmentTable values;
};

/// i * integral tr(Lambda^T [dH/dw, rho]) over each weight's segment, for every
/// parameter (trainable or not). Throws NumericalError if the imaginary residue
/// exceeds 1e-8.
SegmentTable adjoint_integral(const RhoTrajectory& rho, const RhoTrajectory& lambda,
                              const ParamSchedule& schedule, UnitConvention units);

GradientResult gradient(const RhoTrainingPair& pair, const ParamSchedule& schedule,
                        const Observable& obs, UnitConvention units, double h);

/// Heisenberg-picture readout: the observable pulled back to t = 0, so that
/// tr(rho0 O_eff) equals tr(rho(t_f) O) for any initial state. One backward
/// propagation serves any number of evaluations.
struct Readout {
  ObservableKind kind = ObservableKind::Linear;
  Matrix4c effective;

  double expectation(const Matrix4c& rho0) const;
  double output(const Matrix4c& rho0) const;
};

Readout make_readout(const ParamSchedule& schedule, const Observable& obs, UnitConvention units,
                     double h);

/// sqrt(mean (d - output)^2) over pairs under the given schedule.
double rms_error(const std::vector<RhoTrainingPair>& pairs, const ParamSchedule& schedule,
                 const Observable& obs, UnitConvention units, double h);

/// Gradient descent over all pairs. The history holds each epoch's RMS error.
/// Batch mode sums pair gradients and applies them once per epoch; per-pattern
/// mode updates after each pair in order.
TrainResult train(const std::vector<RhoTrainingPair>& pairs, const ParamSchedule& schedule,
                  const Observable& obs, const TrainConfig& cfg);

}  // namespace dynlearn
