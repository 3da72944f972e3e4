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

// Object-centric proposal decoding: per-level center peaks are ranked across
// levels, and each kept peak becomes a thing query whose box is read from the
// regression map and whose content vector is pooled over its voted mask.

#include <cstddef>
#include <span>
#include <vector>

#include "ocseg/geometry.hpp"
#include "ocseg/kernels.hpp"
#include "ocseg/rasters.hpp"

namespace ocseg {

struct OcpDecodeConfig {
  int n_things = 250;
  int n_stuff = 50;
  int nms_window = 3;
  float prob_floor = 0.05f;
  double theta_fraction = 0.02;  // voting radius as a fraction of map width
  bool normalize_content = false;
};

// Head outputs for one level. All maps share the level's grid.
struct OcpLevelHeads {
  int stride = 4;
  ScalarMap center;
  RegressionMap regression;
  ScalarMap objectness;
  FeatureMap features;
};

struct Proposal {
  int stride = 4;
  kernels::CellCoord cell;
  float probability = 0.0f;
  Box box{0.0, 0.0, 0.0, 0.0, Units::kNormalized};
  std::vector<float> content;
  BinaryMask approx_mask;  // level grid
  bool size_clamped = false;
  bool empty_pool = false;
};

struct QuerySet {
  std::vector<std::vector<float>> stuff;
  std::vector<Proposal> things;
};

// Strict window maxima above `floor`, sorted by probability descending with
// row-major order among equal values.
std::vector<kernels::Peak> heatmap_nms(const ScalarMap& center, int window,
                                       float floor);

struct LevelPeaks {
  int stride = 4;
  std::vector<kernels::Peak> peaks;
};

struct RankedPeak {
  int stride = 4;
  kernels::Peak peak;

  bool operator==(const RankedPeak&) const = default;
};

// Global order: probability descending, then finer stride, then row-major.
std::vector<RankedPeak> rank_and_select(std::span<const LevelPeaks> levels,
                                        std::size_t n_max);

struct PositionalQuery {
  Box box;
  bool clamped = false;  // a negative size or out-of-image center was clamped
};

PositionalQuery positional_query(const RegressionMap& reg,
                                 kernels::CellCoord cell, int image_w,
                                 int image_h);

double voting_threshold(int map_width, double fraction);

// One mask per proposal; masks are disjoint.
std::vector<BinaryMask> instance_voting(const RegressionMap& reg,
                                        std::span<const kernels::CellCoord> cells,
                                        double theta);

struct ContentQuery {
  std::vector<float> vector;
  bool empty_weight = false;
};

// sum_j mask(j) * objectness(j) * features(j); optionally divided by the
// total weight.
ContentQuery content_query(const FeatureMap& features,
                           const ScalarMap& objectness, const BinaryMask& mask,
                           bool normalize = false);

// Throws kInvalidArgument unless exactly the strides {4, 8, 16, 32, 64} are
// present, and kShapeMismatch when a level's maps disagree in size.
QuerySet decode_all(std::span<const OcpLevelHeads> levels,
                    std::vector<std::vector<float>> stuff_queries, int image_h,
                    int image_w, const OcpDecodeConfig& config = {});

}  // namespace ocseg
