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

#include "dynlearn/harness/presets.hpp"

#include <cmath>
#include <numbers>

#include "dynlearn/error.hpp"

namespace dynlearn::harness {

namespace {

using family::Ket;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

StateFamily ket_state(double a00, double a01, double a10, double a11) {
  Ket k;
  k.amplitudes << a00, a01, a10, a11;
  return k;
}

ParamSchedule gate_schedule() {
  ParamSchedule s(300.0);
  s.set(ParamId::KA, {2.1333}, false);
  s.set(ParamId::KB, {2.1333}, true);
  s.set(ParamId::EpsA, {1000.0}, false);
  s.set(ParamId::EpsB, {0.1, 0.1, 0.1}, true);
  s.set(ParamId::Zeta, {0.1}, true);
  return s;
}

ExperimentPreset gate_preset(std::string name, const std::array<double, 4>& targets) {
  ExperimentPreset p;
  p.name = std::move(name);
  p.kind = PresetKind::DensityTraining;
  p.schedule = gate_schedule();
  p.observable = gate_observable();
  const char* labels[4] = {"|00>", "|01>", "|10>", "|11>"};
  for (int k = 0; k < 4; ++k) {
    StateFamily s = ket_state(k == 0, k == 1, k == 2, k == 3);
    p.training.push_back({labels[k], s, targets[k]});
  }
  p.train.eta = 1.0;
  p.train.epochs = 3000;
  return p;
}

ExperimentPreset cnot_preset() {
  ExperimentPreset p;
  p.name = "control-cnot";
  p.summary = "ket-picture control toward a controlled-NOT with a relative phase on the flipped branch";
  p.kind = PresetKind::KetTraining;
  ParamSchedule s(300.0);
  s.set(ParamId::KA, {0.0}, false);
  s.set(ParamId::EpsA, {0.0}, false);
  s.set(ParamId::KB, {5.0, 5.0, 5.0}, true);
  s.set(ParamId::Zeta, {2.0, 2.0, 2.0}, true);
  s.set(ParamId::EpsB, {1.0, 1.0, 1.0}, true);
  p.schedule = s;
  // The Hamiltonian is traceless on each control branch, so the flip must carry
  // a determinant-compatible phase: |10> -> -|11>, |11> -> |10>.
  const auto e = [](int k) { return basis_ket(k); };
  p.control = {{"|00>", e(0), e(0)},
               {"|01>", e(1), e(1)},
               {"|10>", e(2), Vector4c(-e(3))},
               {"|11>", e(3), e(2)}};
  p.train.eta = 1.0;
  p.train.epochs = 2000;
  return p;
}

ExperimentPreset witness_base(std::string name, PresetKind kind) {
  ExperimentPreset p;
  p.name = std::move(name);
  p.kind = kind;
  p.schedule = witness_initial_schedule();
  p.observable = witness_observable();
  p.training = witness_training_set(kPTarget);
  p.testing = witness_testing_set(kPTarget);
  p.train.eta = 0.15;
  p.train.epochs = 2000;
  return p;
}

ExperimentPreset sweep_preset(std::string name, std::string summary, StateFamily family,
                              std::string param, double from, double to, int points) {
  ExperimentPreset p = witness_base(std::move(name), PresetKind::Sweep);
  p.summary = std::move(summary);
  p.sweep = SweepRange{std::move(family), std::move(param), from, to, points};
  return p;
}

}  // namespace

std::string_view to_string(PresetKind kind) {
  switch (kind) {
    case PresetKind::DensityTraining: return "density-training";
    case PresetKind::KetTraining: return "ket-training";
    case PresetKind::Evaluation: return "evaluation";
    case PresetKind::Sweep: return "sweep";
    case PresetKind::TargetScan: return "target-scan";
  }
  return "unknown";
}

std::vector<LabeledState> witness_training_set(double p_target) {
  return {{"bell", family::Bell{0.0}, 1.0},
          {"flat", family::Flat{}, 0.0},
          {"c(0.5)", family::C{0.5, 0.0}, 0.0},
          {"p", family::P{}, p_target}};
}

std::vector<LabeledState> witness_testing_set(double p_target) {
  return {{"epr(0)", family::Epr{0.0}, 1.0},
          {"epr(pi)", family::Epr{std::numbers::pi}, 1.0},
          {"bell(pi)", family::Bell{std::numbers::pi}, 1.0},
          {"|00>", ket_state(1, 0, 0, 0), 0.0},
          {"|10>+0.9|11>", ket_state(0, 0, 1, 0.9), 0.0},
          {"p2", family::P2{}, p_target},
          {"m", family::M{}, 0.0}};
}

ParamSchedule witness_initial_schedule() {
  ParamSchedule s(1000.0);
  s.set(ParamId::KA, {2.5, 2.5, 2.5, 2.5});
  s.set(ParamId::KB, {2.5, 2.5, 2.5, 2.5});
  s.set(ParamId::EpsA, {0.1, 0.1, 0.1, 0.1});
  s.set(ParamId::EpsB, {0.1, 0.1, 0.1, 0.1});
  s.set(ParamId::Zeta, {0.1, 0.1, 0.1, 0.1});
  return s;
}

ParamSchedule witness_trained_schedule() {
  ParamSchedule s(1000.0);
  s.set(ParamId::KA, {2.3576, 2.3576, 2.3577, 2.3461});
  s.set(ParamId::KB, {2.3576, 2.3576, 2.3576, 2.3546});
  s.set(ParamId::EpsA, {0.10913, 0.03768, 0.08671, 0.071464});
  s.set(ParamId::EpsB, {0.10913, 0.063774, 0.038802, 0.072387});
  s.set(ParamId::Zeta, {0.045026, 0.10117, 0.10771, 0.044221});
  return s;
}

std::vector<std::string> preset_names() {
  return {"gates-xor",   "gates-xnor",  "control-cnot",    "witness-train", "witness-test",
          "fig1-target-scan", "fig2-p3", "fig3-werner", "fig4-mprime", "fig5-bell-phase",
          "fig6-c-phase", "fig7-p-phase", "fig8-p-phase2", "grid-product", "grid-mixed"};
}

ExperimentPreset make_preset(std::string_view name) {
  if (name == "gates-xor") {
    ExperimentPreset p = gate_preset("gates-xor", {-1.0, 1.0, 1.0, -1.0});
    p.summary = "XOR on <sz_B> with a strongly detuned control qubit";
    return p;
  }
  if (name == "gates-xnor") {
    ExperimentPreset p = gate_preset("gates-xnor", {1.0, -1.0, -1.0, 1.0});
    p.summary = "XNOR on <sz_B> with a strongly detuned control qubit";
    return p;
  }
  if (name == "control-cnot") return cnot_preset();
  if (name == "witness-train") {
    ExperimentPreset p = witness_base("witness-train", PresetKind::DensityTraining);
    p.summary = "entanglement witness trained on four states, squared sz_A sz_B readout";
    return p;
  }
  if (name == "witness-test") {
    ExperimentPreset p = witness_base("witness-test", PresetKind::Evaluation);
    p.summary = "trained witness on the seven-state testing set";
    return p;
  }
  if (name == "fig1-target-scan") {
    ExperimentPreset p = witness_base("fig1-target-scan", PresetKind::TargetScan);
    p.summary = "total train+test error as a function of the P target";
    p.scan_targets = {0.32, 0.38, 0.42, 0.4432, 0.46, 0.50, 0.55};
    p.train.epochs = 1500;
    return p;
  }
  if (name == "fig2-p3")
    return sweep_preset("fig2-p3", "witness along |00>+|11>+gamma|01>", family::P3{}, "gamma", 0.0,
                        2.0, 41);
  if (name == "fig3-werner")
    return sweep_preset("fig3-werner", "witness along Werner states", family::Werner{}, "F", 0.0,
                        1.0, 41);
  if (name == "fig4-mprime")
    return sweep_preset("fig4-mprime", "witness along (gamma|01><01| + Phi+)/(1+gamma)",
                        family::MPrime{}, "gamma", 0.0, 4.0, 41);
  if (name == "fig5-bell-phase")
    return sweep_preset("fig5-bell-phase", "witness along |00>+e^{i theta}|11>", family::Bell{},
                        "theta", 0.0, kTwoPi, 20);
  if (name == "fig6-c-phase")
    return sweep_preset("fig6-c-phase", "witness along |0>(|0>+e^{i theta}|1>)",
                        family::C{1.0, 0.0}, "theta", 0.0, kTwoPi, 20);
  if (name == "fig7-p-phase")
    return sweep_preset("fig7-p-phase", "witness along |00>+|11>+e^{i theta}|01>",
                        family::PPhase{}, "theta", 0.0, kTwoPi, 20);
  if (name == "fig8-p-phase2")
    return sweep_preset("fig8-p-phase2", "witness along |00>+e^{i theta}|11>+|01>",
                        family::PPhase2{}, "theta", 0.0, kTwoPi, 20);
  if (name == "grid-product") {
    ExperimentPreset p = witness_base("grid-product", PresetKind::Evaluation);
    p.summary = "trained witness on a 100 x 100 grid of real product states";
    p.grid = GridKind::Product;
    p.grid_size = 100;
    p.testing.clear();
    return p;
  }
  if (name == "grid-mixed") {
    ExperimentPreset p = witness_base("grid-mixed", PresetKind::Evaluation);
    p.summary = "trained witness on 10000 separable mixtures";
    p.grid = GridKind::Mixed;
    p.grid_size = 10000;
    p.testing.clear();
    return p;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

std::string observable_name(const Observable& obs) {
  std::string op = "custom";
  if (obs.op == generator(ParamId::EpsB)) op = "szB";
  else if (obs.op == generator(ParamId::Zeta)) op = "szA*szB";
  return std::string(obs.kind == ObservableKind::Linear ? "linear " : "squared ") + op;
}

const std::vector<PresetAnchor>& preset_anchors() {
  // Segment counts and trainable flags in parameter order KA, KB, EpsA, EpsB, Zeta.
  static const std::vector<PresetAnchor> anchors = [] {
    const std::array<int, 5> gate_seg{1, 1, 1, 3, 1};
    const std::array<bool, 5> gate_train{false, true, false, true, true};
    const std::array<int, 5> wit_seg{4, 4, 4, 4, 4};
    const std::array<bool, 5> all{true, true, true, true, true};
    std::vector<PresetAnchor> a = {
        {"gates-xor", 300.0, gate_seg, gate_train, "linear szB"},
        {"gates-xnor", 300.0, gate_seg, gate_train, "linear szB"},
        {"control-cnot", 300.0, {1, 3, 1, 3, 3}, {false, true, false, true, true}, "ket overlap"},
    };
    for (const char* n : {"witness-train", "witness-test", "fig1-target-scan", "fig2-p3",
                          "fig3-werner", "fig4-mprime", "fig5-bell-phase", "fig6-c-phase",
                          "fig7-p-phase", "fig8-p-phase2", "grid-product", "grid-mixed"}) {
      a.push_back({n, 1000.0, wit_seg, all, "squared szA*szB"});
    }
    return a;
  }();
  return anchors;
}

std::vector<std::string> anchor_mismatches(const ExperimentPreset& preset) {
  std::vector<std::string> out;
  const PresetAnchor* anchor = nullptr;
  for (const auto& a : preset_anchors())
    if (a.name == preset.name) anchor = &a;
  if (!anchor) return {"no anchor entry for preset " + preset.name};
  if (preset.schedule.t_final() != anchor->t_final)
    out.push_back("t_final " + std::to_string(preset.schedule.t_final()) + " != " +
                  std::to_string(anchor->t_final));
  for (ParamId p : kAllParams) {
    const auto i = index_of(p);
    if (static_cast<int>(preset.schedule.segment_count(p)) != anchor->segments[i])
      out.push_back(std::string(dynlearn::to_string(p)) + " segments " +
                    std::to_string(preset.schedule.segment_count(p)) + " != " +
                    std::to_string(anchor->segments[i]));
    if (preset.schedule.trainable(p) != anchor->trainable[i])
      out.push_back(std::string(dynlearn::to_string(p)) + " trainable flag differs");
  }
  const std::string obs =
      preset.kind == PresetKind::KetTraining ? "ket overlap" : observable_name(preset.observable);
  if (obs != anchor->observable)
    out.push_back("observable " + obs + " != " + std::string(anchor->observable));
  return out;
}

}  // namespace dynlearn::harness
