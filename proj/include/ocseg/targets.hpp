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

// Supervision targets for the per-level proposal heads: Gaussian center maps,
// box regression, objectness and the ignore regions of objects outside a
// level's size range.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "ocseg/geometry.hpp"
#include "ocseg/kernels.hpp"
#include "ocseg/rasters.hpp"

namespace ocseg {

struct GtInstance {
  int class_id = 0;
  bool is_thing = false;
  BinaryMask mask;  // full image resolution
  Box box;          // tight pixel box of `mask`

  // Derives the tight box. Throws kInvalidArgument on an empty mask.
  static GtInstance from_mask(int class_id, bool is_thing, BinaryMask mask);

  // Box diagonal in image pixels; the quantity levels are keyed on.
  double diagonal() const;
  std::int64_t area() const { return mask.area(); }
};

// Supervision interval of box diagonals for one level, closed on both ends.
struct LevelSizeRange {
  int stride = 4;
  double d_min = 0.0;
  double d_max = std::numeric_limits<double>::infinity();

  bool contains(double d) const { return d >= d_min && d <= d_max; }
};

// Coarsest level first: 64, 32, 16, 8, 4.
std::vector<LevelSizeRange> level_ranges();
LevelSizeRange level_range_for_stride(int stride);
std::vector<int> strides_covering(double diagonal);

// Cells along one axis for a level: ceil(extent / stride).
int level_extent(int image_extent, int stride);

struct CenterTargetConfig {
  double sigma2 = 1.0;         // cells^2
  double radius_sigmas = 4.0;  // support truncation
};

// Where an instance's Gaussian peaks on a stride-s grid: the center of the
// cell containing its box center, clamped to the grid.
kernels::GaussianCenter center_cell_position(const GtInstance& instance,
                                             int stride, int map_h, int map_w);

// Max over in-range thing instances of the truncated Gaussian. Instances
// outside the range contribute nothing, so their centers read 0.
ScalarMap center_targets(std::span<const GtInstance> instances,
                         const LevelSizeRange& level, int map_h, int map_w,
                         const CenterTargetConfig& config = {});

struct RegressionObjectnessTargets {
  RegressionMap regression;
  ScalarMap objectness;
  BinaryMask ignore;  // level grid
};

// Each cell reads the pixel under its center. Overlapping things resolve to
// the smaller instance. Cells owned by an in-range thing get regression and
// objectness 1; cells owned by an out-of-range thing are ignored; all other
// cells are objectness 0.
RegressionObjectnessTargets regression_objectness_targets(
    std::span<const GtInstance> instances, const LevelSizeRange& level,
    int map_h, int map_w);

struct OcpLevelTargets {
  int stride = 4;
  ScalarMap center;
  RegressionMap regression;
  ScalarMap objectness;
  BinaryMask ignore;
};

// Targets for all five levels of an image, finest stride first.
std::vector<OcpLevelTargets> ocp_targets(std::span<const GtInstance> instances,
                                         int image_h, int image_w,
                                         const CenterTargetConfig& config = {});

}  // namespace ocseg
