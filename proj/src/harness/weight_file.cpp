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

#include "dynlearn/harness/weight_file.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dynlearn::harness {

namespace {

using json = nlohmann::ordered_json;

template <typename T>
T required(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError(std::string("weight file is missing '") + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& err) {
    throw ValidationError(std::string("weight file field '") + key + "': " + err.what());
  }
}

}  // namespace

std::string to_json(const WeightFile& weights) {
  json doc;
  doc["schema_version"] = weights.schema_version;
  doc["units"] = std::string(to_string(weights.units));
  doc["t_final"] = weights.schedule.t_final();
  doc["h"] = weights.h;
  json params = json::object();
  for (ParamId p : kAllParams) {
    const auto seg = weights.schedule.segments(p);
    params[std::string(to_string(p))] = {
        {"values", std::vector<double>(seg.begin(), seg.end())},
        {"trainable", weights.schedule.trainable(p)}};
  }
  doc["parameters"] = std::move(params);
  const Provenance& prov = weights.provenance;
  doc["provenance"] = {{"preset", prov.preset},
                       {"epochs", prov.epochs},
                       {"final_rms", prov.final_rms ? json(*prov.final_rms) : json(nullptr)},
                       {"seed", prov.seed}};
  return doc.dump(2) + "\n";
}

WeightFile weight_file_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("weight file is not valid JSON: ") + err.what());
  }
  WeightFile out;
  out.schema_version = required<int>(doc, "schema_version");
  if (out.schema_version != kWeightSchemaVersion) {
    throw ValidationError("unsupported weight schema version " + std::to_string(out.schema_version));
  }
  const auto units = units_from_string(required<std::string>(doc, "units"));
  if (!units) throw ValidationError("weight file has an unknown unit convention");
  out.units = *units;
  out.h = required<double>(doc, "h");
  out.schedule = ParamSchedule(required<double>(doc, "t_final"));
  const json params = required<json>(doc, "parameters");
  for (ParamId p : kAllParams) {
    const json entry = params.contains(std::string(to_string(p)))
                           ? params.at(std::string(to_string(p)))
                           : throw ValidationError("weight file lacks parameter " +
                                                   std::string(to_string(p)));
    out.schedule.set(p, required<std::vector<double>>(entry, "values"),
                     required<bool>(entry, "trainable"));
  }
  const json& prov = doc.contains("provenance") ? doc.at("provenance") : json::object();
  if (!prov.empty()) {
    out.provenance.preset = required<std::string>(prov, "preset");
    out.provenance.epochs = required<int>(prov, "epochs");
    if (prov.contains("final_rms") && !prov.at("final_rms").is_null()) out.provenance.final_rms = required<double>(prov, "final_rms");
    out.provenance.seed = required<std::uint64_t>(prov, "seed");
  }
  // Segment counts must tile t_f on the integration grid.
  make_grid(out.schedule, out.h);
  return out;
}

void save_weights(const WeightFile& weights, const std::filesystem::path& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot open " + path.string() + " for writing");
  file << to_json(weights);
  if (!file) throw Error("failed writing " + path.string());
}

WeightFile load_weights(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot open weight file " + path.string());
  std::ostringstream buf;
  buf << file.rdbuf();
  return weight_file_from_json(buf.str());
}

}  // namespace dynlearn::harness
