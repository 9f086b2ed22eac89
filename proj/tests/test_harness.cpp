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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "catch_amalgamated.hpp"
#include "dynlearn/error.hpp"
#include "dynlearn/harness/experiments.hpp"

using namespace dynlearn;
using namespace dynlearn::harness;
using Catch::Matchers::WithinAbs;

namespace {

const std::filesystem::path kData = DYNLEARN_DATA_DIR;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

WeightFile reference_weights(UnitConvention units) {
  WeightFile w;
  w.units = units;
  w.schedule = witness_trained_schedule();
  w.provenance = {"reference-trained", 2000, std::nullopt, 0};
  return w;
}

}  // namespace

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1000.0) == "1000");
  CHECK(format_number(-2.5e-13) == "-2.5e-13");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_number(x)) == x);
}

TEST_CASE("csv tables") {
  CsvTable t({"a", "b"});
  t.add_meta("preset", "x");
  t.add_row({"1", "2.5"});
  CHECK(t.str() == "# preset: x\na,b\n1,2.5\n");
  CHECK(t.number(0, "b") == 2.5);
  CHECK_THROWS_AS(t.add_row({"1"}), ValidationError);
  CHECK_THROWS_AS(t.column("c"), ValidationError);
}

TEST_CASE("weight files round-trip byte for byte") {
  WeightFile w = reference_weights(UnitConvention::TwoPiMilli);
  w.schedule.set_trainable(ParamId::KA, false);
  w.provenance.final_rms = 1.0 / 3.0;
  w.provenance.seed = 18446744073709551557ull;
  const std::string text = to_json(w);
  const WeightFile back = weight_file_from_json(text);
  CHECK(back == w);
  CHECK(to_json(back) == text);
}

TEST_CASE("bundled fixtures match the code-built reference schedules") {
  for (UnitConvention u : {UnitConvention::RawMilli, UnitConvention::TwoPiMilli}) {
    const std::string suffix = std::string(to_string(u)) + ".json";
    const WeightFile trained = load_weights(kData / ("witness_reference_trained_" + suffix));
    const WeightFile initial = load_weights(kData / ("witness_reference_initial_" + suffix));
    CHECK(trained.units == u);
    CHECK(trained.schedule == witness_trained_schedule());
    CHECK(initial.schedule == witness_initial_schedule());
    CHECK(to_json(trained) == slurp(kData / ("witness_reference_trained_" + suffix)));
  }
  const WeightFile gates = load_weights(kData / "gates_reference_initial.json");
  CHECK(gates.schedule == make_preset("gates-xor").schedule);
}

TEST_CASE("loading validates layout and schema") {
  WeightFile w = reference_weights(UnitConvention::RawMilli);
  std::string text = to_json(w);
  const auto swap = [](std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
  };
  CHECK_THROWS_AS(weight_file_from_json(swap(text, "\"schema_version\": 1", "\"schema_version\": 7")),
                  ValidationError);
  CHECK_THROWS_AS(weight_file_from_json(swap(text, "\"raw\"", "\"hz\"")), ValidationError);
  // Three segments cannot tile 20000 steps.
  w.schedule.set(ParamId::Zeta, {0.1, 0.1, 0.1});
  CHECK_THROWS_AS(weight_file_from_json(to_json(w)), ValidationError);
  CHECK_THROWS_AS(weight_file_from_json("{"), ValidationError);
  CHECK_THROWS_AS(weight_file_from_json("{\"schema_version\": 1}"), ValidationError);
  CHECK_THROWS_AS(load_weights(kData / "missing.json"), ValidationError);
}

TEST_CASE("presets encode the experiment layouts") {
  const ExperimentPreset xor_p = make_preset("gates-xor");
  CHECK(xor_p.schedule.t_final() == 300.0);
  CHECK(xor_p.schedule.segment_count(ParamId::EpsB) == 3);
  CHECK(xor_p.schedule.value(ParamId::EpsA, 0) == 1000.0);
  CHECK_FALSE(xor_p.schedule.trainable(ParamId::EpsA));
  CHECK(observable_name(xor_p.observable) == "linear szB");
  const ExperimentPreset w = make_preset("witness-train");
  CHECK(w.schedule.t_final() == 1000.0);
  for (ParamId p : kAllParams) {
    CHECK(w.schedule.segment_count(p) == 4);
    CHECK(w.schedule.trainable(p));
  }
  CHECK(observable_name(w.observable) == "squared szA*szB");
  CHECK(w.training.size() == 4);
  CHECK(w.testing.size() == 7);
  CHECK(make_preset("fig5-bell-phase").sweep->points == 20);
  CHECK(make_preset("fig2-p3").sweep->points == 41);
  CHECK_THROWS_AS(make_preset("gates-nand"), ValidationError);
}

TEST_CASE("every preset matches its anchor and describes itself") {
  for (const std::string& name : preset_names()) {
    const ExperimentPreset p = make_preset(name);
    INFO(name);
    CHECK(anchor_mismatches(p).empty());
    const std::string text = describe(p);
    CHECK(text.find("anchors: ok") != std::string::npos);
    CHECK(text.find("preset: " + name) != std::string::npos);
  }
  ExperimentPreset broken = make_preset("gates-xor");
  broken.schedule.set(ParamId::EpsB, {0.1, 0.1});
  CHECK_FALSE(anchor_mismatches(broken).empty());
}

TEST_CASE("describe labels reference outputs with their unit convention") {
  const std::string text = describe(make_preset("witness-train"));
  CHECK(text.find("initial outputs [units=raw]") != std::string::npos);
  CHECK(text.find("initial outputs [units=twopi]") != std::string::npos);
}

TEST_CASE("untrained witness under the 2 pi convention reproduces the reference initial outputs") {
  const Readout r = make_readout(witness_initial_schedule(), witness_observable(),
                                 UnitConvention::TwoPiMilli, 0.05);
  const auto set = witness_training_set(kPTarget);
  const double expected[4] = {1.0, 0.0, 0.36, 0.11};
  for (std::size_t k = 0; k < 4; ++k)
    CHECK_THAT(r.output(make(set[k].state)), WithinAbs(expected[k], 0.01));
}

TEST_CASE("eval rows use the readout and match forward propagation") {
  const WeightFile w = reference_weights(UnitConvention::RawMilli);
  const auto states = resolve_state_set("testing", 0);
  const CsvTable t = run_eval(w, states);
  REQUIRE(t.rows().size() == 7);
  for (std::size_t k = 0; k < states.size(); ++k) {
    const double fwd =
        forward_output({states[k].rho, 0.0}, w.schedule, witness_observable(), w.units, w.h).output;
    CHECK_THAT(t.number(k, "qnn_output"), WithinAbs(fwd, 1e-12));
  }
  CHECK(t.rows()[0][0] == "epr(0)");
  CHECK_THAT(t.number(0, "concurrence"), WithinAbs(1.0, 1e-8));
}

TEST_CASE("eval refuses a unit convention mismatch") {
  const WeightFile w = reference_weights(UnitConvention::RawMilli);
  CHECK_THROWS_AS(run_eval(w, resolve_state_set("flat", 0), UnitConvention::TwoPiMilli),
                  ValidationError);
  CHECK_NOTHROW(run_eval(w, resolve_state_set("flat", 0), UnitConvention::RawMilli));
}

TEST_CASE("eval of an empty list is a header-only table") {
  const CsvTable t = run_eval(reference_weights(UnitConvention::RawMilli), {});
  CHECK(t.rows().empty());
  const std::string s = t.str();
  CHECK(s.substr(s.rfind("state,")) ==
        "state,qnn_output,concurrence,eof,spin_flip_overlap,tg_witness\n");
}

TEST_CASE("eval output is deterministic") {
  const WeightFile w = reference_weights(UnitConvention::RawMilli);
  const std::string a = run_eval(w, resolve_state_set("grid-mixed", 3)).str();
  const std::string b = run_eval(w, resolve_state_set("grid-mixed", 3)).str();
  CHECK(a == b);
  CHECK(resolve_state_set("grid-product", 1).size() == 10000);
}

TEST_CASE("sweeps are inclusive and evaluate the family") {
  const WeightFile w = reference_weights(UnitConvention::RawMilli);
  const CsvTable t = run_sweep(w, make_preset("fig3-werner").sweep.value());
  REQUIRE(t.rows().size() == 41);
  CHECK(t.number(0, "F") == 0.0);
  CHECK(t.number(40, "F") == 1.0);
  CHECK_THAT(t.number(40, "eof"), WithinAbs(1.0, 1e-8));
  CHECK_THAT(t.number(40, "tg_witness"), WithinAbs(-1.0, 1e-12));
  const SweepRange bad{family::Flat{}, "theta", 0.0, 1.0, 3};
  CHECK_THROWS_AS(run_sweep(w, bad), ValidationError);
  const CsvTable bell = run_sweep(w, make_preset("fig5-bell-phase").sweep.value());
  CHECK_THAT(bell.number(19, "theta"), WithinAbs(2.0 * std::numbers::pi, 1e-15));
}

TEST_CASE("overrides come from JSON and the environment") {
  const RunOverrides o =
      overrides_from_json(R"({"eta": 0.5, "epochs": 7, "units": "twopi", "seed": 9, "mode": "per-pattern"})");
  CHECK(o.eta == 0.5);
  CHECK(o.epochs == 7);
  CHECK(o.units == UnitConvention::TwoPiMilli);
  CHECK(o.mode == UpdateMode::PerPattern);
  CHECK_THROWS_AS(overrides_from_json(R"({"etaa": 1})"), ValidationError);
  CHECK_THROWS_AS(overrides_from_json(R"({"epochs": "many"})"), ValidationError);
  CHECK_THROWS_AS(overrides_from_json("[1]"), ValidationError);

  ::unsetenv("QNN_SEED");
  CHECK(apply_overrides(make_preset("gates-xor"), o).seed == 9);
  ::setenv("QNN_SEED", "1234", 1);
  CHECK(effective_seed(5) == 1234);
  CHECK(apply_overrides(make_preset("gates-xor"), o).seed == 1234);
  ::setenv("QNN_SEED", "x1", 1);
  CHECK_THROWS_AS(effective_seed(5), ValidationError);
  ::unsetenv("QNN_SEED");
  CHECK(effective_seed(5) == 5);
}

TEST_CASE("short training run produces weights, history and outputs") {
  RunOverrides o;
  o.epochs = 3;
  const ExperimentPreset p = apply_overrides(make_preset("gates-xnor"), o);
  const TrainingRun run = run_training(p);
  CHECK(run.history.rows().size() == 3);
  CHECK(run.outputs.rows().size() == 4);
  CHECK(run.weights.provenance.preset == "gates-xnor");
  CHECK(run.weights.provenance.epochs == 3);
  CHECK(run.weights.schedule.value(ParamId::EpsA, 0) == 1000.0);
  CHECK(weight_file_from_json(to_json(run.weights)) == run.weights);
  // Identical configuration gives identical output.
  CHECK(run_training(p).history.str() == run.history.str());
  CHECK_THROWS_AS(run_training(make_preset("fig2-p3")), ValidationError);
}

TEST_CASE("short ket training run") {
  RunOverrides o;
  o.epochs = 2;
  const TrainingRun run = run_training(apply_overrides(make_preset("control-cnot"), o));
  CHECK(run.outputs.header()[1] == "fidelity");
  CHECK(run.outputs.rows().size() == 4);
}

TEST_CASE("a single-value target scan yields one row") {
  ExperimentPreset p = make_preset("fig1-target-scan");
  p.train.epochs = 2;
  const ScanResult r = run_target_scan(p, {0.44});
  REQUIRE(r.table.rows().size() == 1);
  CHECK(r.best_target == 0.44);
  CHECK(r.table.rows()[0][4] == "ok");
  CHECK_THROWS_AS(run_target_scan(p, {}), ValidationError);
}

TEST_CASE("a diverging scan entry is recorded and the scan continues") {
  ExperimentPreset p = make_preset("fig1-target-scan");
  p.train.epochs = 2;
  p.train.eta = 1e15;
  const ScanResult r = run_target_scan(p, {0.5, 0.3});
  REQUIRE(r.table.rows().size() == 2);
  CHECK(r.table.rows()[0][0] == "0.3");
  CHECK(r.table.rows()[0][4] == "diverged");
  CHECK_FALSE(r.best_target.has_value());
}

TEST_CASE("reference replay covers both conventions") {
  const CsvTable t = replay_fixture_testing();
  CHECK(t.rows().size() == 14);
  CHECK(t.rows()[0][0] == "raw");
  CHECK(t.rows()[7][0] == "twopi");
}
