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

#include "dynlearn/learn_rho.hpp"

#include <cmath>
#include <sstream>

namespace dynlearn {

namespace {

constexpr double kImagResidueLimit = 1e-8;

void require_pairs(const std::vector<RhoTrainingPair>& pairs) {
  if (pairs.empty()) throw ValidationError("training needs at least one pair");
}

}  // namespace

double Observable::expectation(const Matrix4c& rho) const {
  return std::real(trace_of_product(rho, op));
}

double Observable::output_from(double x) const {
  return kind == ObservableKind::Linear ? x : x * x;
}

double Observable::chain_factor(double x) const {
  return kind == ObservableKind::Linear ? 1.0 : 2.0 * x;
}

Observable gate_observable() {
  return {ObservableKind::Linear, generator(ParamId::EpsB)};
}

Observable witness_observable() {
  return {ObservableKind::Squared, generator(ParamId::Zeta)};
}

ForwardResult forward_output(const RhoTrainingPair& pair, const ParamSchedule& schedule,
                             const Observable& obs, UnitConvention units, double h) {
  ForwardResult out;
  out.trajectory = evolve_rho(pair.rho0, schedule, units, h);
  out.expectation = obs.expectation(out.trajectory.back());
  out.output = obs.output_from(out.expectation);
  return out;
}

Matrix4c terminal_lambda(double expectation, double target, const Observable& obs) {
  const double residual = target - obs.output_from(expectation);
  return (residual * obs.chain_factor(expectation)) * obs.op.transpose();
}

SegmentTable adjoint_integral(const RhoTrajectory& rho, const RhoTrajectory& lambda,
                              const ParamSchedule& schedule, UnitConvention units) {
  require_matching(rho, lambda);
  const TimeGrid grid = make_grid(schedule, rho.h);
  if (grid.size() != rho.size()) {
    throw ValidationError("trajectory length does not match the schedule grid");
  }

  // tr(Lambda^T [G, rho]) = tr(G [rho, Lambda^T]); the commutator is shared by
  // all five generators.
  std::array<std::vector<std::complex<double>>, kParamCount> integrand;
  for (auto& v : integrand) v.resize(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Matrix4c lt = lambda[n].transpose();
    const Matrix4c c = rho[n] * lt - lt * rho[n];
    for (ParamId p : kAllParams) integrand[index_of(p)][n] = trace_of_product(generator(p), c);
  }

  const std::complex<double> i_factor(0.0, angular_factor(units));
  SegmentTable out = schedule.zeros_like();
  for (ParamId p : kAllParams) {
    const auto& f = integrand[index_of(p)];
    for (std::size_t k = 0; k < schedule.segment_count(p); ++k) {
      const auto [first, last] = segment_grid_range(schedule, p, k, grid);
      std::complex<double> sum = 0.5 * (f[first] + f[last]);
      for (std::size_t n = first + 1; n < last; ++n) sum += f[n];
      const std::complex<double> value = i_factor * grid.h * sum;
      if (std::abs(value.imag()) > kImagResidueLimit) {
        std::ostringstream msg;
        msg << "gradient for " << to_string(p) << "(" << k << ") has imaginary residue "
            << value.imag() << "; forward and adjoint passes are inconsistent";
        throw NumericalError(msg.str());
      }
      out[index_of(p)][k] = value.real();
    }
  }
  return out;
}

GradientResult gradient(const RhoTrainingPair& pair, const ParamSchedule& schedule,
                        const Observable& obs, UnitConvention units, double h) {
  const ForwardResult fwd = forward_output(pair, schedule, obs, units, h);
  const Matrix4c lambda_final = terminal_lambda(fwd.expectation, pair.target, obs);
  const RhoTrajectory lambda = evolve_adjoint_rho(lambda_final, schedule, units, h);
  const double residual = pair.target - fwd.output;
  return {fwd.output, 0.5 * residual * residual,
          adjoint_integral(fwd.trajectory, lambda, schedule, units)};
}

double Readout::expectation(const Matrix4c& rho0) const {
  return std::real(trace_of_product(rho0, effective));
}

double Readout::output(const Matrix4c& rho0) const {
  const double x = expectation(rho0);
  return kind == ObservableKind::Linear ? x : x * x;
}

Readout make_readout(const ParamSchedule& schedule, const Observable& obs, UnitConvention units,
                     double h) {
  const RhoTrajectory lambda = evolve_adjoint_rho(obs.op.transpose(), schedule, units, h);
  return {obs.kind, lambda.front().transpose()};
}

double rms_error(const std::vector<RhoTrainingPair>& pairs, const ParamSchedule& schedule,
                 const Observable& obs, UnitConvention units, double h) {
  require_pairs(pairs);
  const Readout readout = make_readout(schedule, obs, units, h);
  double sum = 0.0;
  for (const auto& pair : pairs) {
    const double r = pair.target - readout.output(pair.rho0);
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

TrainResult train(const std::vector<RhoTrainingPair>& pairs, const ParamSchedule& schedule,
                  const Observable& obs, const TrainConfig& cfg) {
  require_pairs(pairs);
  for (const auto& pair : pairs) {
    if (!is_density(pair.rho0, 1e-9)) throw ValidationError("training pair is not a density matrix");
  }
  const double count = static_cast<double>(pairs.size());

  EpochStep batch_epoch = [&](ParamSchedule& sched, double eta) {
    // Every pair's multiplier is a scalar multiple of the one started from
    // O^T, and the forward equation is linear, so one backward pass and one
    // forward pass of the residual-weighted initial operator serve the batch.
    // The backward pass also yields every pair's output as a readout.
    const RhoTrajectory unit_lambda = evolve_adjoint_rho(obs.op.transpose(), sched, cfg.units, cfg.h);
    const Readout readout{obs.kind, unit_lambda.front().transpose()};
    Matrix4c weighted = Matrix4c::Zero();
    double sq = 0.0;
    for (const auto& pair : pairs) {
      const double x = readout.expectation(pair.rho0);
      const double residual = pair.target - obs.output_from(x);
      sq += residual * residual;
      weighted += (residual * obs.chain_factor(x)) * pair.rho0;
    }
    const RhoTrajectory forward = evolve_operator(weighted, sched, cfg.units, cfg.h);
    apply_update(sched, adjoint_integral(forward, unit_lambda, sched, cfg.units), eta);
    return std::sqrt(sq / count);
  };

  EpochStep per_pattern_epoch = [&](ParamSchedule& sched, double eta) {
    double sq = 0.0;
    for (const auto& pair : pairs) {
      const GradientResult g = gradient(pair, sched, obs, cfg.units, cfg.h);
      const double residual = pair.target - g.output;
      sq += residual * residual;
      apply_update(sched, g.values, eta);
    }
    return std::sqrt(sq / count);
  };

  return run_descent(schedule, cfg, cfg.mode == UpdateMode::Batch ? batch_epoch : per_pattern_epoch,
                     [&](const ParamSchedule& sched) {
                       return rms_error(pairs, sched, obs, cfg.units, cfg.h);
                     });
}

}  // namespace dynlearn
