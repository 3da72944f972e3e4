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

// Ground-truth scenes and copy-paste augmentation.

#include <span>
#include <string>
#include <vector>

#include "ocseg/rasters.hpp"
#include "ocseg/rng.hpp"
#include "ocseg/targets.hpp"

namespace ocseg {

// An image's GT as a list of disjoint instances.
struct GtScene {
  int height = 0;
  int width = 0;
  std::vector<GtInstance> instances;

  // Instances in ascending segment id order; segments without pixels are
  // skipped.
  static GtScene from_panoptic(const PanopticMap& map);
  // Segment ids are instance index + 1.
  PanopticMap to_panoptic() const;
};

struct CopyPasteConfig {
  int max_retries = 100;  // placement attempts per donor
};

struct CopyPasteResult {
  GtScene scene;
  std::vector<std::string> warnings;
};

// Pastes n donors, each drawn uniformly with replacement, at uniform integer
// offsets that keep the donor inside the image and put the centroid pixel of
// its mask inside `region`. A 0x0 region means anywhere. Pasted pixels occlude
// earlier instances; instances left without pixels are removed. A donor with
// no valid placement is skipped with a warning.
CopyPasteResult copy_paste(const GtScene& target, std::span<const GtInstance> donors,
                           const BinaryMask& region, int n, Rng& rng,
                           const CopyPasteConfig& config = {});

}  // namespace ocseg
