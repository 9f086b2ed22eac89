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

// Seeded random instances shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "dynlearn/dynamics.hpp"

namespace dynlearn::testing {

inline Vector4c random_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Vector4c v;
  for (int k = 0; k < 4; ++k) v(k) = {n(rng), n(rng)};
  return v.normalized();
}

/// Normalized sum of `rank` random rank-one terms.
inline Matrix4c random_density(std::mt19937_64& rng, int rank) {
  Matrix4c rho = Matrix4c::Zero();
  for (int r = 0; r < rank; ++r) {
    const Vector4c v = random_ket(rng);
    rho += v * v.adjoint();
  }
  return rho / rho.trace().real();
}

/// One to four segments per parameter, values uniform in [-scale, scale].
/// Segment counts are restricted to divisors of the step count at h = 0.05.
inline ParamSchedule random_schedule(std::mt19937_64& rng, double t_final, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  const long steps = std::lround(t_final / 0.05);
  std::vector<int> counts;
  for (int c = 1; c <= 4; ++c)
    if (steps % c == 0) counts.push_back(c);
  std::uniform_int_distribution<std::size_t> pick(0, counts.size() - 1);
  ParamSchedule s(t_final);
  for (ParamId p : kAllParams) {
    std::vector<double> v(static_cast<std::size_t>(counts[pick(rng)]));
    for (double& x : v) x = u(rng);
    s.set(p, v);
  }
  return s;
}

/// Central differences of `loss` with respect to every segment value.
template <typename Loss>
SegmentTable finite_difference(const ParamSchedule& s, double delta, Loss&& loss) {
  SegmentTable out = s.zeros_like();
  for (ParamId p : kAllParams) {
    for (std::size_t k = 0; k < s.segment_count(p); ++k) {
      ParamSchedule plus = s, minus = s;
      plus.value(p, k) += delta;
      minus.value(p, k) -= delta;
      out[index_of(p)][k] = (loss(plus) - loss(minus)) / (2.0 * delta);
    }
  }
  return out;
}

/// ||a - b|| / ||b|| over all segment values.
inline double relative_error(const SegmentTable& a, const SegmentTable& b) {
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    for (std::size_t k = 0; k < b[i].size(); ++k) {
      diff += (a[i][k] - b[i][k]) * (a[i][k] - b[i][k]);
      norm += b[i][k] * b[i][k];
    }
  }
  return std::sqrt(diff) / std::sqrt(norm);
}

}  // namespace dynlearn::testing
