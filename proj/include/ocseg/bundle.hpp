// Copyright 2026 The ocseg Authors.
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

// JSON manifests for everything the command-line tools read and write.
// Tensor payloads live in separate tensor files referenced by relative path.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocseg/matching.hpp"
#include "ocseg/metrics.hpp"
#include "ocseg/ocp_decode.hpp"
#include "ocseg/prediction.hpp"
#include "ocseg/rasters.hpp"
#include "ocseg/targets.hpp"

namespace ocseg {

inline constexpr int kFormatVersion = 1;

using nlohmann::json;

// Parses a file; kMissingFile if absent, kMalformedManifest if not JSON.
json read_json_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline, written atomically.
void write_json_file(const std::filesystem::path& path, const json& j);

// Throws kMalformedManifest unless j.format_version == kFormatVersion.
void check_format_version(const json& j);

json mask_to_json(const BinaryMask& mask);
BinaryMask mask_from_json(const json& j);

json box_to_json(const Box& box);
Box box_from_json(const json& j, Units units);

struct PanopticRecord {
  std::string image_id;
  PanopticMap map;

  bool operator==(const PanopticRecord&) const = default;
};

json panoptic_to_json(const PanopticRecord& record);
PanopticRecord panoptic_from_json(const json& j);

struct HeadsBundle {
  std::string image_id;
  int height = 0;
  int width = 0;
  std::vector<OcpLevelHeads> levels;
  std::vector<std::vector<float>> stuff_queries;
};

// Tensor paths are resolved against the manifest's directory and checked
// against the declared level shapes (kShapeMismatch on disagreement).
HeadsBundle read_heads_bundle(const std::filesystem::path& manifest);
// Writes the manifest and one tensor file per map next to it, named after
// the manifest stem.
void write_heads_bundle(const std::filesystem::path& manifest,
                        const HeadsBundle& bundle);

json proposals_to_json(const std::string& image_id, int height, int width,
                       const QuerySet& queries);

struct PredictionBundle {
  std::string image_id;
  int height = 0;
  int width = 0;
  std::vector<InstancePrediction> predictions;
};

// Masks are either inline ({stride, height, width, values}), a tensor file
// ({tensor}) or a binary run-length mask ({stride, rle}).
PredictionBundle read_prediction_bundle(const std::filesystem::path& path);
json prediction_bundle_to_json(const PredictionBundle& bundle);

json match_set_to_json(const std::string& image_id, bool refined,
                       const MatchSet& set);

struct ClassInfo {
  int id = 0;
  std::string name;
  bool is_thing = false;
};

struct ClassTable {
  std::vector<ClassInfo> classes;

  const ClassInfo* find(int id) const;
};

ClassTable read_class_table(const std::filesystem::path& path);

json report_to_json(const PqReport& report, const ClassTable* classes);
json detection_to_json(const DetectionCounts& counts);

// Per-level targets: tensors for center, regression, objectness and ignore
// written next to the manifest.
void write_targets(const std::filesystem::path& manifest,
                   const std::string& image_id,
                   const std::vector<OcpLevelTargets>& levels);

}  // namespace ocseg
