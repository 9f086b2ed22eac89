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

// JSON persistence of trained schedules.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dynlearn/dynamics.hpp"

namespace dynlearn::harness {

inline constexpr int kWeightSchemaVersion = 1;

struct Provenance {
  std::string preset;
  int epochs = 0;
  std::optional<double> final_rms;
  std::uint64_t seed = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct WeightFile {
  int schema_version = kWeightSchemaVersion;
  UnitConvention units = UnitConvention::RawMilli;
  /// Integration step the weights were trained with.
  double h = 0.05;
  ParamSchedule schedule;
  Provenance provenance;

  friend bool operator==(const WeightFile&, const WeightFile&) = default;
};

/// Pretty-printed JSON; doubles in shortest round-trip form, so
/// load(save(w)) == w and save(load(text)) == text for saved text.
std::string to_json(const WeightFile& weights);
/// Validates the schema version and the segment layout against t_f and h.
WeightFile weight_file_from_json(std::string_view text);

void save_weights(const WeightFile& weights, const std::filesystem::path& path);
WeightFile load_weights(const std::filesystem::path& path);

}  // namespace dynlearn::harness
