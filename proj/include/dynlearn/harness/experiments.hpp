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

// Running presets: training, evaluation, sweeps, target scans.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynlearn/harness/csv.hpp"
#include "dynlearn/harness/presets.hpp"
#include "dynlearn/harness/weight_file.hpp"

namespace dynlearn::harness {

struct RunOverrides {
  std::optional<double> eta;
  std::optional<int> epochs;
  std::optional<UnitConvention> units;
  std::optional<std::uint64_t> seed;
  std::optional<double> stop_rms;
  std::optional<UpdateMode> mode;
};

/// Reads {"eta", "epochs", "units", "seed", "stop_rms", "mode"}; unknown keys are
/// a ValidationError.
RunOverrides overrides_from_json(std::string_view text);

/// QNN_SEED, when set, replaces the configured seed.
std::uint64_t effective_seed(std::uint64_t configured);

/// Preset with overrides applied to its training configuration and seed.
ExperimentPreset apply_overrides(ExperimentPreset preset, const RunOverrides& overrides);

struct TrainingRun {
  WeightFile weights;
  CsvTable history;
  /// Per-pair outputs under the trained weights.
  CsvTable outputs;
};

/// ValidationError unless the preset trains; DivergenceError propagates.
TrainingRun run_training(const ExperimentPreset& preset);

struct EvalState {
  std::string label;
  Matrix4c rho;
  double desired = 0.0;
};

std::vector<EvalState> to_eval_states(const std::vector<LabeledState>& states);
/// "testing", "grid-product", "grid-mixed" or a family spec such as "werner:F=0.7".
std::vector<EvalState> resolve_state_set(std::string_view set, std::uint64_t seed);

/// Columns: state, qnn_output, concurrence, eof, spin_flip_overlap, tg_witness.
/// `requested` must match the weights' convention when given.
CsvTable run_eval(const WeightFile& weights, const std::vector<EvalState>& states,
                  std::optional<UnitConvention> requested = std::nullopt);

/// Inclusive linear sweep. Columns: <param>, qnn_output, eof, tg_witness.
CsvTable run_sweep(const WeightFile& weights, const SweepRange& range,
                   std::optional<UnitConvention> requested = std::nullopt);

struct ScanResult {
  CsvTable table;
  std::optional<double> best_target;
};

/// Retrains the witness for each P target and scores train plus test squared
/// error. Diverged runs are recorded and skipped. Rows are sorted by target.
ScanResult run_target_scan(const ExperimentPreset& preset, std::vector<double> targets);

/// Reference witness weights evaluated on the testing set under both unit
/// conventions.
CsvTable replay_fixture_testing();

std::string describe(const ExperimentPreset& preset);

/// Root mean square of (desired - qnn_output) over an eval table's rows.
double eval_rms(const CsvTable& eval, const std::vector<EvalState>& states);

}  // namespace dynlearn::harness
