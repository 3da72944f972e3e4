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

// Greedy panoptic fusion: predictions paste their pixels in confidence order
// and are dropped when too little of them survives occlusion.

#include <cstdint>
#include <span>

#include "ocseg/mask_decode.hpp"
#include "ocseg/prediction.hpp"
#include "ocseg/rasters.hpp"

namespace ocseg {

struct FusionConfig {
  double confidence_floor = 0.3;  // predictions below are skipped
  double retention = 0.5;         // minimum surviving fraction of a mask
  std::int64_t stuff_min_area = 0;
  float mask_threshold = 0.5f;
  Upsample upsample = Upsample::kBilinear;
};

void validate(const FusionConfig& config);

// Masks are upsampled from their grid to image_h x image_w before
// thresholding. Segment ids run from 1 in paste order; unclaimed pixels are
// void (0). Equal confidences paste things first, then in input order.
PanopticMap fuse(std::span<const InstancePrediction> things,
                 std::span<const InstancePrediction> stuffs, int image_h,
                 int image_w, const FusionConfig& config = {});

}  // namespace ocseg
