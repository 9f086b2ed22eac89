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

// dynlearn command-line interface.
//
// Exit codes: 0 success, 2 validation error, 3 divergence, 1 other failures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dynlearn/harness/experiments.hpp"

namespace {

using namespace dynlearn;
using namespace dynlearn::harness;

constexpr int kExitValidation = 2;
constexpr int kExitDivergence = 3;

std::optional<UnitConvention> parse_units(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto units = units_from_string(text);
  if (!units) throw ValidationError("units must be 'raw' or 'twopi', got '" + text + "'");
  return units;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

void emit(const CsvTable& table, const std::string& out) {
  if (out.empty()) {
    std::cout << table.str();
  } else {
    table.write(out);
    std::cerr << "wrote " << out << '\n';
  }
}

struct TrainArgs {
  std::string preset, config, units, out, history;
  std::optional<double> eta;
  std::optional<int> epochs;
};

int cmd_train(const TrainArgs& a) {
  RunOverrides o = a.config.empty() ? RunOverrides{} : overrides_from_json(read_file(a.config));
  if (a.eta) o.eta = a.eta;
  if (a.epochs) o.epochs = a.epochs;
  if (auto u = parse_units(a.units)) o.units = u;
  const ExperimentPreset preset = apply_overrides(make_preset(a.preset), o);
  const TrainingRun run = run_training(preset);
  const std::string out = a.out.empty() ? preset.name + ".weights.json" : a.out;
  const std::string history = a.history.empty() ? preset.name + ".history.csv" : a.history;
  save_weights(run.weights, out);
  run.history.write(history);
  std::cout << run.outputs.str();
  std::cerr << "wrote " << out << " and " << history << '\n';
  return 0;
}

struct EvalArgs {
  std::string weights, set, units, out;
  std::optional<std::uint64_t> seed;
};

int cmd_eval(const EvalArgs& a) {
  const WeightFile weights = load_weights(a.weights);
  const std::uint64_t seed = effective_seed(a.seed.value_or(make_preset("grid-product").seed));
  CsvTable table = run_eval(weights, resolve_state_set(a.set, seed), parse_units(a.units));
  table.add_meta("set", a.set);
  table.add_meta("seed", std::to_string(seed));
  emit(table, a.out);
  return 0;
}

struct SweepArgs {
  std::string weights, family, param, units, out;
  double from = 0.0, to = 1.0;
  int points = 20;
};

int cmd_sweep(const SweepArgs& a) {
  const WeightFile weights = load_weights(a.weights);
  const SweepRange range{parse_family(a.family), a.param, a.from, a.to, a.points};
  emit(run_sweep(weights, range, parse_units(a.units)), a.out);
  return 0;
}

struct ScanArgs {
  std::vector<double> values;
  std::string config, out;
  std::optional<double> eta;
  std::optional<int> epochs;
};

int cmd_scan(const ScanArgs& a) {
  RunOverrides o = a.config.empty() ? RunOverrides{} : overrides_from_json(read_file(a.config));
  if (a.eta) o.eta = a.eta;
  if (a.epochs) o.epochs = a.epochs;
  const ExperimentPreset preset = apply_overrides(make_preset("fig1-target-scan"), o);
  const ScanResult result = run_target_scan(preset, a.values.empty() ? preset.scan_targets : a.values);
  emit(result.table, a.out);
  if (result.best_target) std::cerr << "minimum total error at target " << *result.best_target << '\n';
  return 0;
}

int cmd_describe(const std::string& name) {
  const ExperimentPreset preset = make_preset(name);
  std::cout << describe(preset);
  return anchor_mismatches(preset).empty() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjoint-gradient training of two-qubit control schedules"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a preset and write its weights");
  train->add_option("preset", train_args.preset, "preset name")->required();
  train->add_option("--config", train_args.config, "JSON overrides file");
  train->add_option("--eta", train_args.eta, "learning rate");
  train->add_option("--epochs", train_args.epochs, "epoch count");
  train->add_option("--units", train_args.units, "raw or twopi");
  train->add_option("--out", train_args.out, "weight file to write");
  train->add_option("--history", train_args.history, "per-epoch metric CSV to write");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate weights on a state set");
  eval->add_option("--weights", eval_args.weights, "weight file")->required();
  eval->add_option("--set", eval_args.set, "testing, grid-product, grid-mixed or a family spec")
      ->required();
  eval->add_option("--units", eval_args.units, "expected unit convention");
  eval->add_option("--seed", eval_args.seed, "grid seed");
  eval->add_option("--out", eval_args.out, "CSV file (default stdout)");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "sweep one family parameter");
  sweep->add_option("--weights", sweep_args.weights, "weight file")->required();
  sweep->add_option("--family", sweep_args.family, "family name or spec")->required();
  sweep->add_option("--param", sweep_args.param, "parameter to sweep")->required();
  sweep->add_option("--from", sweep_args.from, "first value")->required();
  sweep->add_option("--to", sweep_args.to, "last value")->required();
  sweep->add_option("--points", sweep_args.points, "number of points")->capture_default_str();
  sweep->add_option("--units", sweep_args.units, "expected unit convention");
  sweep->add_option("--out", sweep_args.out, "CSV file (default stdout)");

  ScanArgs scan_args;
  auto* scan = app.add_subcommand("scan-target", "retrain the witness across P targets");
  scan->add_option("--values", scan_args.values, "comma-separated targets")->delimiter(',');
  scan->add_option("--config", scan_args.config, "JSON overrides file");
  scan->add_option("--eta", scan_args.eta, "learning rate");
  scan->add_option("--epochs", scan_args.epochs, "epochs per retraining");
  scan->add_option("--out", scan_args.out, "CSV file (default stdout)");

  std::string describe_name;
  auto* desc = app.add_subcommand("describe", "print a preset and check its layout");
  desc->add_option("preset", describe_name, "preset name")->required();

  std::string replay_out;
  auto* replay = app.add_subcommand("replay-reference",
                                    "evaluate the reference witness weights under both conventions");
  replay->add_option("--out", replay_out, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*train) return cmd_train(train_args);
    if (*eval) return cmd_eval(eval_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*scan) return cmd_scan(scan_args);
    if (*desc) return cmd_describe(describe_name);
    if (*replay) {
      emit(replay_fixture_testing(), replay_out);
      return 0;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
