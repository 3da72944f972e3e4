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

// Every tunable constant in one place, loadable from JSON. Keys left out of
// a config file keep their defaults.

#include <string>
#include <vector>

#include "json.hpp"
#include "ocseg/augment.hpp"
#include "ocseg/fusion.hpp"
#include "ocseg/geometry.hpp"
#include "ocseg/losses.hpp"
#include "ocseg/mask_decode.hpp"
#include "ocseg/matching.hpp"
#include "ocseg/metrics.hpp"
#include "ocseg/ocp_decode.hpp"
#include "ocseg/targets.hpp"

namespace ocseg {

struct Config {
  OcpDecodeConfig ocp;
  CenterTargetConfig centers;
  MaskDecodeConfig mask;
  LossWeights loss_weights;
  FocalParams focal;
  RefinementThresholds refinement;
  OverlapMode stage2_overlap = OverlapMode::kBox;
  BoxNoise box_noise;
  int n_mask_conditioned = kMaxMaskConditionedQueries;
  double nms_iou = 0.7;
  FusionConfig fusion;
  CopyPasteConfig copy_paste;
  std::vector<double> size_bins = default_size_bins();
};

// Throws kMalformedManifest on unknown keys, wrong types or invalid values.
Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& config);
Config load_config(const std::string& path);

}  // namespace ocseg
