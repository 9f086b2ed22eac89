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

// Quantum control in the ket picture: drive psi(0) toward psi_des at t_f.
//
// Loss per pair is 1/2 |1 - <psi_des|psi(t_f)>|^2. The ket multiplier obeys
// dlambda/dt = -i H* lambda and the weight gradient is
//
//   dL/dw = integral 2 Re[-i lambda^dagger (dH/dw) psi] dt.

#include <complex>
#include <vector>

#include "dynlearn/descent.hpp"
#include "dynlearn/dynamics.hpp"
#include "dynlearn/learn_rho.hpp"

namespace dynlearn {

struct KetTrainingPair {
  Vector4c psi0;
  Vector4c psi_target;
};

struct ControlResult {
  std::complex<double> overlap;
  double fidelity = 0.0;
  Vector4c final_state;
};

ControlResult control_output(const KetTrainingPair& pair, const ParamSchedule& schedule,
                             UnitConvention units, double h);

double control_loss(std::complex<double> overlap);

/// lambda(t_f) = -(1 - overlap)/2 psi_des.
Vector4c terminal_lambda_ket(std::complex<double> overlap, const Vector4c& psi_target);

GradientResult gradient_ket(const KetTrainingPair& pair, const ParamSchedule& schedule,
                            UnitConvention units, double h);

/// Sum of pair losses under the schedule.
double total_control_loss(const std::vector<KetTrainingPair>& pairs, const ParamSchedule& schedule,
                          UnitConvention units, double h);

/// Gradient descent on the summed pair losses; history holds each epoch's
/// total loss.
TrainResult train_control(const std::vector<KetTrainingPair>& pairs, const ParamSchedule& schedule,
                          const TrainConfig& cfg);

}  // namespace dynlearn
