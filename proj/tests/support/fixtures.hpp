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

// Synthetic scenes shared by the unit tests, the acceptance suite and the
// benchmark.

#include <cstdint>
#include <vector>

#include "ocseg/bundle.hpp"
#include "ocseg/geometry.hpp"
#include "ocseg/kernels.hpp"
#include "ocseg/ocp_decode.hpp"
#include "ocseg/prediction.hpp"
#include "ocseg/rasters.hpp"
#include "ocseg/rng.hpp"
#include "ocseg/targets.hpp"

namespace ocseg::fixture {

// Filled axis-aligned rectangle [x0, x1) x [y0, y1).
BinaryMask rect_mask(int height, int width, int x0, int y0, int x1, int y1);
GtInstance rect_instance(int height, int width, int x0, int y0, int x1, int y1,
                         int class_id, bool is_thing = true);

FeatureMap random_features(Rng& rng, int stride, int height, int width, int channels,
                           float lo = -1.0f, float hi = 1.0f);
ScalarMap random_probs(Rng& rng, int stride, int height, int width);

struct PlantedObject {
  int stride = 4;
  kernels::CellCoord cell;
  Box box;  // pixels, centered on the cell center
};

// Five-level head outputs with objects planted on single levels: a unit
// Gaussian peak at the object's cell, exact regression toward that cell over
// the object's box, objectness 1 there and random regression elsewhere.
struct PlantedScene {
  int height = 0;
  int width = 0;
  std::vector<OcpLevelHeads> levels;  // strides 4..64
  std::vector<PlantedObject> objects;
};

PlantedScene make_planted_scene(int k, std::uint64_t seed, int image_size = 1024,
                                int channels = 8);

// Two GTs (A class 0, B class 1) and three thing queries: q0 and q1 cover A
// with box IoU 0.9, q2 has drifted onto B's mask while its box overlaps B
// with IoU 0.1.
struct DriftScene {
  int height = 100;
  int width = 100;
  std::vector<InstancePrediction> preds;
  std::vector<GtInstance> gts;
};

DriftScene make_drift_scene();

// Random boxes and masks on a small image for matching properties.
struct MatchScene {
  std::vector<InstancePrediction> preds;
  std::vector<GtInstance> gts;
};

MatchScene random_match_scene(Rng& rng, int image = 64);

// Up to `max_segments` rectangles painted in sequence over a void canvas.
// Classes below `thing_classes` are things.
PanopticMap random_panoptic(Rng& rng, int height, int width, int max_segments,
                            int classes, int thing_classes);

// Jitters every segment of `gt` and sometimes changes its class, keeping ids
// distinct from the source.
PanopticMap perturb_panoptic(Rng& rng, const PanopticMap& gt, int classes,
                             int thing_classes);

}  // namespace ocseg::fixture
