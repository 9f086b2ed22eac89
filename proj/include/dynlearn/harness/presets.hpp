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

// Named experiment configurations.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynlearn/learn_ket.hpp"
#include "dynlearn/learn_rho.hpp"
#include "dynlearn/states.hpp"

namespace dynlearn::harness {

enum class PresetKind { DensityTraining, KetTraining, Evaluation, Sweep, TargetScan };

std::string_view to_string(PresetKind kind);

struct LabeledState {
  std::string label;
  StateFamily state;
  /// Desired output where the state belongs to a training or testing set.
  double desired = 0.0;
};

struct LabeledKetPair {
  std::string label;
  Vector4c input;
  Vector4c target;
};

struct SweepRange {
  StateFamily family;
  std::string param;
  double from = 0.0;
  double to = 1.0;
  int points = 20;
};

enum class GridKind { None, Product, Mixed };

struct ExperimentPreset {
  std::string name;
  std::string summary;
  PresetKind kind = PresetKind::Evaluation;
  /// Initial weights for training presets; expected weight layout otherwise.
  ParamSchedule schedule;
  Observable observable;
  std::vector<LabeledState> training;
  std::vector<LabeledKetPair> control;
  std::vector<LabeledState> testing;
  TrainConfig train;
  std::optional<SweepRange> sweep;
  GridKind grid = GridKind::None;
  /// Points per axis for product grids, state count for mixed grids.
  int grid_size = 0;
  std::vector<double> scan_targets;
  std::uint64_t seed = 20260101;
};

std::vector<std::string> preset_names();
/// ValidationError for unknown names.
ExperimentPreset make_preset(std::string_view name);

/// Witness training set with the entangled-partial target for P.
std::vector<LabeledState> witness_training_set(double p_target);
/// Witness testing set; P2's desired value is the P target.
std::vector<LabeledState> witness_testing_set(double p_target);
inline constexpr double kPTarget = 0.44317;

/// Reference witness weights before and after training, four segments each.
ParamSchedule witness_initial_schedule();
ParamSchedule witness_trained_schedule();

/// Expected layout of each preset, checked by `describe`.
struct PresetAnchor {
  std::string_view name;
  double t_final;
  std::array<int, kParamCount> segments;
  std::array<bool, kParamCount> trainable;
  std::string_view observable;
};

const std::vector<PresetAnchor>& preset_anchors();
/// Human-readable mismatches between the preset and its anchor; empty when consistent.
std::vector<std::string> anchor_mismatches(const ExperimentPreset& preset);
std::string observable_name(const Observable& obs);

}  // namespace dynlearn::harness
