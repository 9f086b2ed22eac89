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

// Plain gradient descent over a ParamSchedule, shared by the density-matrix
// and ket learners.

#include <functional>
#include <optional>
#include <vector>

#include "dynlearn/dynamics.hpp"

namespace dynlearn {

enum class UpdateMode { Batch, PerPattern };

struct TrainConfig {
  double eta = 0.01;
  int epochs = 1;
  double h = 0.05;
  UnitConvention units = UnitConvention::RawMilli;
  UpdateMode mode = UpdateMode::Batch;
  /// Stop as soon as an epoch's error metric is at or below this value.
  std::optional<double> stop_rms;
  /// Epoch metric above this counts as divergence.
  double divergence_threshold = 1e3;
  /// How many times eta may be halved before giving up.
  int max_eta_halvings = 6;

  void validate() const;
};

struct TrainResult {
  ParamSchedule schedule;
  /// One entry per completed epoch, measured before that epoch's update.
  std::vector<double> history;
  /// Metric of the returned schedule.
  double final_metric = 0.0;
  /// Learning rate in force at the end (smaller than requested after backoff).
  double eta = 0.0;
  int epochs_run = 0;
};

/// w <- w - eta g for every trainable parameter; untrainable ones are left alone.
void apply_update(ParamSchedule& schedule, const SegmentTable& gradient, double eta);

void accumulate(SegmentTable& into, const SegmentTable& add);

/// Euclidean norm over trainable entries only.
double trainable_norm(const ParamSchedule& schedule, const SegmentTable& gradient);

/// Runs one epoch: updates the schedule in place (using the given eta) and
/// returns the epoch's error metric.
using EpochStep = std::function<double(ParamSchedule& schedule, double eta)>;

/// Epoch loop with divergence backoff. An epoch whose metric is non-finite or
/// above the threshold, or whose propagation raises NumericalError, is rolled
/// back and retried at half the learning rate.
TrainResult run_descent(ParamSchedule schedule, const TrainConfig& cfg, const EpochStep& epoch,
                        const std::function<double(const ParamSchedule&)>& metric);

}  // namespace dynlearn
