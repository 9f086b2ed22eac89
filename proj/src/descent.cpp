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

#include "dynlearn/descent.hpp"

#include <cmath>
#include <sstream>

namespace dynlearn {

void TrainConfig::validate() const {
  if (!(eta > 0.0 && std::isfinite(eta))) throw ValidationError("learning rate must be positive");
  if (epochs < 1) throw ValidationError("epochs must be at least 1");
  if (!(h > 0.0)) throw ValidationError("step size must be positive");
  if (max_eta_halvings < 0) throw ValidationError("max_eta_halvings must be non-negative");
}

void apply_update(ParamSchedule& schedule, const SegmentTable& gradient, double eta) {
  for (ParamId p : kAllParams) {
    if (!schedule.trainable(p)) continue;
    const auto& g = gradient[index_of(p)];
    if (g.size() != schedule.segment_count(p)) {
      throw ValidationError("gradient shape does not match schedule for " + std::string(to_string(p)));
    }
    for (std::size_t k = 0; k < g.size(); ++k) schedule.value(p, k) -= eta * g[k];
  }
}

void accumulate(SegmentTable& into, const SegmentTable& add) {
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (into[i].size() != add[i].size()) throw ValidationError("gradient shapes differ");
    for (std::size_t k = 0; k < add[i].size(); ++k) into[i][k] += add[i][k];
  }
}

double trainable_norm(const ParamSchedule& schedule, const SegmentTable& gradient) {
  double s = 0.0;
  for (ParamId p : kAllParams) {
    if (!schedule.trainable(p)) continue;
    for (double g : gradient[index_of(p)]) s += g * g;
  }
  return std::sqrt(s);
}

TrainResult run_descent(ParamSchedule schedule, const TrainConfig& cfg, const EpochStep& epoch,
                        const std::function<double(const ParamSchedule&)>& metric) {
  cfg.validate();
  TrainResult result{schedule, {}, 0.0, cfg.eta, 0};
  double eta = cfg.eta;
  int halvings = 0;

  for (int e = 0; e < cfg.epochs;) {
    ParamSchedule trial = schedule;
    double value = 0.0;
    bool diverged = false;
    std::string reason;
    try {
      value = epoch(trial, eta);
      trial.validate();
      if (!std::isfinite(value) || value > cfg.divergence_threshold) {
        diverged = true;
        std::ostringstream msg;
        msg << "epoch metric " << value;
        reason = msg.str();
      }
    } catch (const NumericalError& err) {
      diverged = true;
      reason = err.what();
    } catch (const ValidationError& err) {
      // Non-finite weights after an update surface here.
      diverged = true;
      reason = err.what();
    }

    if (diverged) {
      if (halvings >= cfg.max_eta_halvings) {
        std::ostringstream msg;
        msg << "training diverged at epoch " << e << " with eta " << eta << " after " << halvings
            << " halvings: " << reason;
        throw DivergenceError(msg.str());
      }
      eta *= 0.5;
      ++halvings;
      continue;
    }

    result.history.push_back(value);
    if (cfg.stop_rms && value <= *cfg.stop_rms) break;
    schedule = std::move(trial);
    ++e;
  }

  result.epochs_run = static_cast<int>(result.history.size());
  result.final_metric = metric(schedule);
  result.schedule = std::move(schedule);
  result.eta = eta;
  return result;
}

}  // namespace dynlearn
