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

#include <random>

#include "catch_amalgamated.hpp"
#include "dynlearn/error.hpp"
#include "dynlearn/learn_ket.hpp"
#include "support.hpp"

using namespace dynlearn;
using namespace dynlearn::testing;
using Catch::Matchers::WithinAbs;

namespace {

constexpr auto kRaw = UnitConvention::RawMilli;

Vector4c basis(int k) { return Vector4c::Unit(k); }

ParamSchedule branch_schedule(std::mt19937_64& rng, double t_final, double scale) {
  ParamSchedule s = random_schedule(rng, t_final, scale);
  s.set(ParamId::KA, {0.0});
  s.set(ParamId::EpsA, {0.0});
  return s;
}

}  // namespace

TEST_CASE("control loss and terminal multiplier") {
  CHECK(control_loss(1.0) == 0.0);
  CHECK(control_loss(-1.0) == 2.0);
  CHECK_THAT(control_loss({0.0, 1.0}), WithinAbs(1.0, 1e-15));
  const Vector4c t = basis(2);
  CHECK((terminal_lambda_ket(0.5, t) - (-0.25) * t).norm() < 1e-15);
  CHECK(terminal_lambda_ket(1.0, t).norm() == 0.0);
}

TEST_CASE("ket gradient matches finite differences") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 6; ++t) {
    const ParamSchedule s = random_schedule(rng, 80.0, 40.0);
    const KetTrainingPair pair{random_ket(rng), random_ket(rng)};
    const GradientResult g = gradient_ket(pair, s, kRaw, 0.05);
    const SegmentTable fd = finite_difference(s, 1e-3, [&](const ParamSchedule& x) {
      return control_loss(control_output(pair, x, kRaw, 0.05).overlap);
    });
    CHECK(relative_error(g.values, fd) < 1e-4);
  }
}

TEST_CASE("identity target at zero Hamiltonian has zero loss and gradient") {
  ParamSchedule s(10.0);
  const KetTrainingPair pair{basis(1), basis(1)};
  const GradientResult g = gradient_ket(pair, s, kRaw, 0.05);
  CHECK(g.loss == 0.0);
  CHECK(g.output == 1.0);
  for (const auto& v : g.values)
    for (double x : v) CHECK(x == 0.0);
}

TEST_CASE("a literal bit flip on the controlled branch costs at least one") {
  // The flipped branch evolves under a traceless 2x2 generator, so its unitary
  // has unit determinant and cannot map |10> -> |11> and |11> -> |10> at once.
  std::mt19937_64 rng(32);
  const std::vector<KetTrainingPair> flip{{basis(2), basis(3)}, {basis(3), basis(2)}};
  for (int t = 0; t < 20; ++t) {
    const ParamSchedule s = branch_schedule(rng, 100.0, 100.0);
    CHECK(total_control_loss(flip, s, kRaw, 0.05) >= 1.0 - 1e-9);
  }
}

TEST_CASE("control training lowers the loss") {
  ParamSchedule s(100.0);
  s.set(ParamId::KB, {2.0, 2.0}, true);
  s.set(ParamId::Zeta, {1.0, 1.0}, true);
  s.set(ParamId::EpsB, {0.5, 0.5}, true);
  s.set_trainable(ParamId::KA, false);
  s.set_trainable(ParamId::EpsA, false);
  const std::vector<KetTrainingPair> pairs{{basis(0), basis(0)}, {basis(2), Vector4c(-basis(3))}};
  TrainConfig cfg;
  cfg.eta = 1.0;
  cfg.epochs = 20;
  const double before = total_control_loss(pairs, s, kRaw, 0.05);
  const TrainResult r = train_control(pairs, s, cfg);
  CHECK(r.final_metric < before);
  CHECK(r.schedule.value(ParamId::KA, 0) == 0.0);
}

TEST_CASE("control training rejects unnormalized pairs") {
  ParamSchedule s(10.0);
  TrainConfig cfg;
  CHECK_THROWS_AS(train_control({{Vector4c::Constant(1.0), basis(0)}}, s, cfg), ValidationError);
  CHECK_THROWS_AS(train_control({}, s, cfg), ValidationError);
}
