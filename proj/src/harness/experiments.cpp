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

#include "dynlearn/harness/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "dynlearn/measures.hpp"
#include "json.hpp"

namespace dynlearn::harness {

namespace {

using json = nlohmann::json;

std::string fmt(double x) { return format_number(x); }

void add_common_meta(CsvTable& table, const std::string& preset, std::uint64_t seed,
                     UnitConvention units, double h) {
  table.add_meta("preset", preset);
  table.add_meta("seed", std::to_string(seed));
  table.add_meta("units", std::string(to_string(units)));
  table.add_meta("h", fmt(h));
}

void add_weight_meta(CsvTable& table, const WeightFile& weights) {
  table.add_meta("units", std::string(to_string(weights.units)));
  table.add_meta("h", fmt(weights.h));
  table.add_meta("weights_preset", weights.provenance.preset);
  table.add_meta("weights_epochs", std::to_string(weights.provenance.epochs));
  table.add_meta("weights_final_rms",
                 weights.provenance.final_rms ? fmt(*weights.provenance.final_rms) : "none");
  table.add_meta("weights_seed", std::to_string(weights.provenance.seed));
}

void require_units(const WeightFile& weights, std::optional<UnitConvention> requested) {
  if (requested && *requested != weights.units) {
    throw ValidationError("weights use units '" + std::string(to_string(weights.units)) +
                          "' but '" + std::string(to_string(*requested)) + "' was requested");
  }
}

Readout witness_readout(const WeightFile& weights) {
  return make_readout(weights.schedule, witness_observable(), weights.units, weights.h);
}

std::vector<RhoTrainingPair> rho_pairs(const std::vector<LabeledState>& states) {
  std::vector<RhoTrainingPair> out;
  for (const auto& s : states) out.push_back({make(s.state), s.desired});
  return out;
}

std::vector<KetTrainingPair> ket_pairs(const std::vector<LabeledKetPair>& pairs) {
  std::vector<KetTrainingPair> out;
  for (const auto& p : pairs) out.push_back({p.input, p.target});
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + fmt(v[k]);
  return out + "]";
}

// Sum of squared errors of a trained witness on a labeled set.
double squared_error(const Readout& readout, const std::vector<LabeledState>& states) {
  double sum = 0.0;
  for (const auto& s : states) {
    const double r = s.desired - readout.output(make(s.state));
    sum += r * r;
  }
  return sum;
}

}  // namespace

RunOverrides overrides_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("config is not valid JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  RunOverrides out;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "eta") out.eta = value.get<double>();
      else if (key == "epochs") out.epochs = value.get<int>();
      else if (key == "seed") out.seed = value.get<std::uint64_t>();
      else if (key == "stop_rms") out.stop_rms = value.get<double>();
      else if (key == "units") {
        out.units = units_from_string(value.get<std::string>());
        if (!out.units) throw ValidationError("config: unknown units " + value.dump());
      } else if (key == "mode") {
        const auto m = value.get<std::string>();
        if (m == "batch") out.mode = UpdateMode::Batch;
        else if (m == "per-pattern") out.mode = UpdateMode::PerPattern;
        else throw ValidationError("config: mode must be batch or per-pattern");
      } else {
        throw ValidationError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& err) {
    throw ValidationError(std::string("config: ") + err.what());
  }
  return out;
}

std::uint64_t effective_seed(std::uint64_t configured) {
  const char* env = std::getenv("QNN_SEED");
  if (!env || !*env) return configured;
  const std::string_view text(env);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ValidationError("QNN_SEED must be an unsigned integer");
  return value;
}

ExperimentPreset apply_overrides(ExperimentPreset preset, const RunOverrides& o) {
  if (o.eta) preset.train.eta = *o.eta;
  if (o.epochs) preset.train.epochs = *o.epochs;
  if (o.units) preset.train.units = *o.units;
  if (o.stop_rms) preset.train.stop_rms = *o.stop_rms;
  if (o.mode) preset.train.mode = *o.mode;
  if (o.seed) preset.seed = *o.seed;
  preset.seed = effective_seed(preset.seed);
  preset.train.validate();
  return preset;
}

TrainingRun run_training(const ExperimentPreset& preset) {
  const TrainConfig& cfg = preset.train;
  TrainResult result;
  CsvTable outputs({"label", "desired", "output"});
  std::string metric = "rms";
  if (preset.kind == PresetKind::DensityTraining) {
    const auto pairs = rho_pairs(preset.training);
    result = train(pairs, preset.schedule, preset.observable, cfg);
    const Readout readout = make_readout(result.schedule, preset.observable, cfg.units, cfg.h);
    for (std::size_t k = 0; k < pairs.size(); ++k)
      outputs.add_row({preset.training[k].label, fmt(pairs[k].target),
                       fmt(readout.output(pairs[k].rho0))});
  } else if (preset.kind == PresetKind::KetTraining) {
    const auto pairs = ket_pairs(preset.control);
    result = train_control(pairs, preset.schedule, cfg);
    outputs = CsvTable({"label", "fidelity", "overlap_re", "overlap_im"});
    double sq = 0.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const ControlResult c = control_output(pairs[k], result.schedule, cfg.units, cfg.h);
      sq += std::norm(1.0 - c.overlap);
      outputs.add_row({preset.control[k].label, fmt(c.fidelity), fmt(c.overlap.real()),
                       fmt(c.overlap.imag())});
    }
    // Loss is a sum of |1 - overlap|^2 / 2; report the RMS of |1 - overlap|.
    result.final_metric = std::sqrt(sq / static_cast<double>(pairs.size()));
    metric = "total_loss";
  } else {
    throw ValidationError("preset '" + preset.name + "' is not a training preset");
  }

  TrainingRun run{WeightFile{}, CsvTable({"epoch", metric}), outputs};
  run.weights.units = cfg.units;
  run.weights.h = cfg.h;
  run.weights.schedule = result.schedule;
  run.weights.provenance = {preset.name, result.epochs_run, result.final_metric, preset.seed};
  for (auto* t : {&run.history, &run.outputs}) {
    add_common_meta(*t, preset.name, preset.seed, cfg.units, cfg.h);
    t->add_meta("eta", fmt(result.eta));
    t->add_meta("final_rms", fmt(result.final_metric));
  }
  for (std::size_t e = 0; e < result.history.size(); ++e)
    run.history.add_row({std::to_string(e), fmt(result.history[e])});
  return run;
}

std::vector<EvalState> to_eval_states(const std::vector<LabeledState>& states) {
  std::vector<EvalState> out;
  for (const auto& s : states) out.push_back({s.label, make(s.state), s.desired});
  return out;
}

std::vector<EvalState> resolve_state_set(std::string_view set, std::uint64_t seed) {
  if (set == "testing") return to_eval_states(witness_testing_set(kPTarget));
  const auto grid_states = [](const std::vector<Matrix4c>& rhos, const char* prefix) {
    std::vector<EvalState> out;
    out.reserve(rhos.size());
    for (std::size_t k = 0; k < rhos.size(); ++k)
      out.push_back({prefix + std::to_string(k), rhos[k], 0.0});
    return out;
  };
  if (set == "grid-product") {
    const ExperimentPreset p = make_preset("grid-product");
    return grid_states(product_grid(p.grid_size, seed), "product-");
  }
  if (set == "grid-mixed") {
    const ExperimentPreset p = make_preset("grid-mixed");
    return grid_states(mixed_grid(p.grid_size, seed), "mixed-");
  }
  const StateFamily state = parse_family(set);
  return {{to_spec(state), make(state), 0.0}};
}

CsvTable run_eval(const WeightFile& weights, const std::vector<EvalState>& states,
                  std::optional<UnitConvention> requested) {
  require_units(weights, requested);
  CsvTable table({"state", "qnn_output", "concurrence", "eof", "spin_flip_overlap", "tg_witness"});
  add_weight_meta(table, weights);
  if (states.empty()) return table;
  const Readout readout = witness_readout(weights);
  for (const auto& s : states) {
    const auto m = measure_all(s.rho);
    table.add_row({s.label, fmt(readout.output(s.rho)), fmt(m.concurrence), fmt(m.eof),
                   fmt(m.spin_flip_overlap), fmt(m.tg_witness)});
  }
  return table;
}

CsvTable run_sweep(const WeightFile& weights, const SweepRange& range,
                   std::optional<UnitConvention> requested) {
  require_units(weights, requested);
  if (range.points < 1) throw ValidationError("sweep needs at least one point");
  if (!std::isfinite(range.from) || !std::isfinite(range.to))
    throw ValidationError("sweep bounds must be finite");
  StateFamily probe = range.family;
  set_parameter(probe, range.param, range.from);
  CsvTable table({range.param, "qnn_output", "eof", "tg_witness"});
  add_weight_meta(table, weights);
  table.add_meta("family", family_name(range.family));
  const Readout readout = witness_readout(weights);
  for (int k = 0; k < range.points; ++k) {
    const double x = range.points == 1
                         ? range.from
                         : range.from + (range.to - range.from) * k / (range.points - 1);
    StateFamily state = range.family;
    set_parameter(state, range.param, x);
    const Matrix4c rho = make(state);
    table.add_row({fmt(x), fmt(readout.output(rho)), fmt(eof(rho)), fmt(tg_witness(rho))});
  }
  return table;
}

ScanResult run_target_scan(const ExperimentPreset& preset, std::vector<double> targets) {
  if (targets.empty()) throw ValidationError("target scan needs at least one value");
  for (double t : targets)
    if (!std::isfinite(t)) throw ValidationError("target values must be finite");
  std::sort(targets.begin(), targets.end());
  ScanResult out{CsvTable({"target", "total_error", "train_error", "test_error", "status"}), {}};
  add_common_meta(out.table, preset.name, preset.seed, preset.train.units, preset.train.h);
  out.table.add_meta("eta", fmt(preset.train.eta));
  out.table.add_meta("epochs", std::to_string(preset.train.epochs));
  double best = INFINITY;
  for (double target : targets) {
    const auto train_set = witness_training_set(target);
    const auto test_set = witness_testing_set(target);
    try {
      const TrainResult r = train(rho_pairs(train_set), preset.schedule, witness_observable(),
                                  preset.train);
      const Readout readout = make_readout(r.schedule, witness_observable(), preset.train.units,
                                           preset.train.h);
      const double tr = squared_error(readout, train_set);
      const double te = squared_error(readout, test_set);
      out.table.add_row({fmt(target), fmt(tr + te), fmt(tr), fmt(te), "ok"});
      if (tr + te < best) {
        best = tr + te;
        out.best_target = target;
      }
    } catch (const DivergenceError&) {
      out.table.add_row({fmt(target), "nan", "nan", "nan", "diverged"});
    }
  }
  out.table.add_meta("best_target", out.best_target ? fmt(*out.best_target) : "none");
  return out;
}

CsvTable replay_fixture_testing() {
  CsvTable table({"units", "state", "desired", "qnn_output"});
  table.add_meta("weights", "reference trained witness schedule");
  const auto states = to_eval_states(witness_testing_set(kPTarget));
  for (UnitConvention units : {UnitConvention::RawMilli, UnitConvention::TwoPiMilli}) {
    const Readout readout = make_readout(witness_trained_schedule(), witness_observable(), units, 0.05);
    for (const auto& s : states)
      table.add_row({std::string(to_string(units)), s.label, fmt(s.desired),
                     fmt(readout.output(s.rho))});
  }
  return table;
}

std::string describe(const ExperimentPreset& preset) {
  std::ostringstream out;
  out << "preset: " << preset.name << '\n'
      << "kind: " << to_string(preset.kind) << '\n'
      << "summary: " << preset.summary << '\n'
      << "t_final: " << fmt(preset.schedule.t_final()) << '\n'
      << "h: " << fmt(preset.train.h) << '\n'
      << "units: " << to_string(preset.train.units) << '\n'
      << "observable: "
      << (preset.kind == PresetKind::KetTraining ? "ket overlap" : observable_name(preset.observable))
      << '\n'
      << "seed: " << preset.seed << '\n';
  if (preset.kind == PresetKind::DensityTraining || preset.kind == PresetKind::KetTraining ||
      preset.kind == PresetKind::TargetScan) {
    out << "eta: " << fmt(preset.train.eta) << '\n' << "epochs: " << preset.train.epochs << '\n';
  }
  for (ParamId p : kAllParams) {
    const auto seg = preset.schedule.segments(p);
    out << "param " << to_string(p) << ": segments=" << seg.size()
        << " trainable=" << (preset.schedule.trainable(p) ? "yes" : "no")
        << " initial=" << join({seg.begin(), seg.end()}) << '\n';
  }
  for (const auto& s : preset.training)
    out << "train " << s.label << " (" << to_spec(s.state) << ") -> " << fmt(s.desired) << '\n';
  for (const auto& s : preset.testing)
    out << "test " << s.label << " (" << to_spec(s.state) << ") -> " << fmt(s.desired) << '\n';
  for (const auto& c : preset.control) out << "control " << c.label << '\n';
  if (preset.sweep) {
    out << "sweep: " << family_name(preset.sweep->family) << " " << preset.sweep->param << " in ["
        << fmt(preset.sweep->from) << ", " << fmt(preset.sweep->to) << "], "
        << preset.sweep->points << " points\n";
  }
  if (preset.grid != GridKind::None)
    out << "grid: " << (preset.grid == GridKind::Product ? "product " : "mixed ")
        << preset.grid_size << '\n';
  if (!preset.scan_targets.empty()) out << "scan targets: " << join(preset.scan_targets) << '\n';

  // Outputs of the reference schedules, labeled with the convention used.
  if (preset.name == "witness-train") {
    for (UnitConvention units : {UnitConvention::RawMilli, UnitConvention::TwoPiMilli}) {
      const Readout r = make_readout(witness_initial_schedule(), witness_observable(), units, 0.05);
      out << "initial outputs [units=" << to_string(units) << "]:";
      for (const auto& s : preset.training) out << ' ' << s.label << '=' << fmt(r.output(make(s.state)));
      out << '\n';
    }
  }
  if (preset.name == "witness-test") {
    const CsvTable replay = replay_fixture_testing();
    for (std::size_t k = 0; k < replay.rows().size(); ++k) {
      const auto& row = replay.rows()[k];
      out << "reference weights [units=" << row[0] << "]: " << row[1] << " -> " << row[3]
          << " (desired " << row[2] << ")\n";
    }
  }
  const auto mismatches = anchor_mismatches(preset);
  if (mismatches.empty()) {
    out << "anchors: ok\n";
  } else {
    for (const auto& m : mismatches) out << "anchor mismatch: " << m << '\n';
  }
  return out.str();
}

double eval_rms(const CsvTable& eval, const std::vector<EvalState>& states) {
  if (eval.rows().size() != states.size())
    throw ValidationError("eval table and state list differ in length");
  if (states.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double r = states[k].desired - eval.number(k, "qnn_output");
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(states.size()));
}

}  // namespace dynlearn::harness
