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

#include "dynlearn/learn_ket.hpp"

#include <cmath>
#include <sstream>

namespace dynlearn {

namespace {

void validate_pair(const KetTrainingPair& pair) {
  if (std::abs(pair.psi0.norm() - 1.0) > 1e-9 || std::abs(pair.psi_target.norm() - 1.0) > 1e-9) {
    throw ValidationError("ket training pair must hold normalized states");
  }
}

}  // namespace

ControlResult control_output(const KetTrainingPair& pair, const ParamSchedule& schedule,
                             UnitConvention units, double h) {
  validate_pair(pair);
  const KetTrajectory psi = evolve_ket(pair.psi0, schedule, units, h);
  const std::complex<double> overlap = pair.psi_target.dot(psi.back());
  return {overlap, std::norm(overlap), psi.back()};
}

double control_loss(std::complex<double> overlap) { return 0.5 * std::norm(1.0 - overlap); }

Vector4c terminal_lambda_ket(std::complex<double> overlap, const Vector4c& psi_target) {
  return (-0.5 * (1.0 - overlap)) * psi_target;
}

GradientResult gradient_ket(const KetTrainingPair& pair, const ParamSchedule& schedule,
                            UnitConvention units, double h) {
  validate_pair(pair);
  const KetTrajectory psi = evolve_ket(pair.psi0, schedule, units, h);
  const std::complex<double> overlap = pair.psi_target.dot(psi.back());
  const KetTrajectory lambda =
      evolve_lambda_ket(terminal_lambda_ket(overlap, pair.psi_target), schedule, units, h);
  require_matching(psi, lambda);
  const TimeGrid grid = make_grid(schedule, h);

  // 2 Re[-i lambda^dagger G psi] per grid point and generator.
  std::array<std::vector<double>, kParamCount> integrand;
  for (auto& v : integrand) v.resize(grid.size());
  const std::complex<double> minus_i(0.0, -1.0);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    for (ParamId p : kAllParams) {
      integrand[index_of(p)][n] = 2.0 * std::real(minus_i * lambda[n].dot(generator(p) * psi[n]));
    }
  }

  const double factor = angular_factor(units);
  GradientResult out{std::norm(overlap), control_loss(overlap), schedule.zeros_like()};
  for (ParamId p : kAllParams) {
    const auto& f = integrand[index_of(p)];
    for (std::size_t k = 0; k < schedule.segment_count(p); ++k) {
      const auto [first, last] = segment_grid_range(schedule, p, k, grid);
      double sum = 0.5 * (f[first] + f[last]);
      for (std::size_t n = first + 1; n < last; ++n) sum += f[n];
      out.values[index_of(p)][k] = factor * grid.h * sum;
    }
  }
  return out;
}

double total_control_loss(const std::vector<KetTrainingPair>& pairs, const ParamSchedule& schedule,
                          UnitConvention units, double h) {
  double total = 0.0;
  for (const auto& pair : pairs) total += control_loss(control_output(pair, schedule, units, h).overlap);
  return total;
}

TrainResult train_control(const std::vector<KetTrainingPair>& pairs, const ParamSchedule& schedule,
                          const TrainConfig& cfg) {
  if (pairs.empty()) throw ValidationError("training needs at least one pair");
  for (const auto& pair : pairs) validate_pair(pair);

  EpochStep epoch = [&](ParamSchedule& sched, double eta) {
    double total = 0.0;
    if (cfg.mode == UpdateMode::Batch) {
      SegmentTable sum = sched.zeros_like();
      for (const auto& pair : pairs) {
        const GradientResult g = gradient_ket(pair, sched, cfg.units, cfg.h);
        total += g.loss;
        accumulate(sum, g.values);
      }
      apply_update(sched, sum, eta);
    } else {
      for (const auto& pair : pairs) {
        const GradientResult g = gradient_ket(pair, sched, cfg.units, cfg.h);
        total += g.loss;
        apply_update(sched, g.values, eta);
      }
    }
    return total;
  };

  return run_descent(schedule, cfg, epoch, [&](const ParamSchedule& sched) {
    return total_control_loss(pairs, sched, cfg.units, cfg.h);
  });
}

}  // namespace dynlearn
