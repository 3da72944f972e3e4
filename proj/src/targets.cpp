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

#include "ocseg/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Full-resolution map of the owning thing instance per pixel (-1 for none).
// Smaller instances win; equal areas go to the lower index.
std::vector<std::int32_t> thing_owner_raster(std::span<const GtInstance> instances,
                                             int image_h, int image_w) {
  std::vector<std::int32_t> owner(static_cast<std::size_t>(image_h) * image_w, -1);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    if (instances[i].is_thing) order.push_back(i);
  }
  // Paint larger first, and for equal areas higher index first.
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto area_a = instances[a].area();
    const auto area_b = instances[b].area();
    if (area_a != area_b) return area_a > area_b;
    return a > b;
  });
  for (const std::size_t i : order) {
    const BinaryMask& m = instances[i].mask;
    if (m.height() != image_h || m.width() != image_w) {
      throw Error(ErrorCode::kShapeMismatch,
                  "instance mask does not match the image size");
    }
    for (const Run& r : m.runs()) {
      std::fill_n(owner.begin() + r.start, r.length, static_cast<std::int32_t>(i));
    }
  }
  return owner;
}

int image_height_of(std::span<const GtInstance> instances) {
  return instances.empty() ? 0 : instances.front().mask.height();
}
int image_width_of(std::span<const GtInstance> instances) {
  return instances.empty() ? 0 : instances.front().mask.width();
}

}  // namespace

GtInstance GtInstance::from_mask(int class_id, bool is_thing, BinaryMask mask) {
  const auto box = rle_decode(mask).tight_box();
  if (!box) throw Error(ErrorCode::kInvalidArgument, "instance mask is empty");
  return GtInstance{class_id, is_thing, std::move(mask), *box};
}

double GtInstance::diagonal() const { return std::hypot(box.w, box.h); }

std::vector<LevelSizeRange> level_ranges() {
  return {{64, 256.0, kInf},
          {32, 128.0, 512.0},
          {16, 64.0, 256.0},
          {8, 32.0, 128.0},
          {4, 0.0, 64.0}};
}

LevelSizeRange level_range_for_stride(int stride) {
  for (const auto& level : level_ranges()) {
    if (level.stride == stride) return level;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no proposal level with stride " + std::to_string(stride));
}

std::vector<int> strides_covering(double diagonal) {
  std::vector<int> out;
  for (const auto& level : level_ranges()) {
    if (level.contains(diagonal)) out.push_back(level.stride);
  }
  return out;
}

int level_extent(int image_extent, int stride) {
  return (image_extent + stride - 1) / stride;
}

kernels::GaussianCenter center_cell_position(const GtInstance& instance,
                                             int stride, int map_h, int map_w) {
  const int cx = std::clamp(static_cast<int>(std::floor(instance.box.cx / stride)),
                            0, std::max(map_w - 1, 0));
  const int cy = std::clamp(static_cast<int>(std::floor(instance.box.cy / stride)),
                            0, std::max(map_h - 1, 0));
  return {cx + 0.5, cy + 0.5};
}

ScalarMap center_targets(std::span<const GtInstance> instances,
                         const LevelSizeRange& level, int map_h, int map_w,
                         const CenterTargetConfig& config) {
  std::vector<kernels::GaussianCenter> centers;
  for (const GtInstance& inst : instances) {
    if (inst.is_thing && level.contains(inst.diagonal())) {
      centers.push_back(center_cell_position(inst, level.stride, map_h, map_w));
    }
  }
  ScalarMap out(level.stride, map_h, map_w);
  kernels::omp::gaussian_max(centers, config.sigma2,
                             config.radius_sigmas * std::sqrt(config.sigma2), out);
  return out;
}

namespace {

RegressionObjectnessTargets regression_from_owner(
    std::span<const GtInstance> instances, std::span<const std::int32_t> owner,
    int image_h, int image_w, const LevelSizeRange& level, int map_h,
    int map_w) {
  const int s = level.stride;
  RegressionMap regression(s, map_h, map_w);
  ScalarMap objectness(s, map_h, map_w);
  MaskGrid ignore(map_h, map_w);
  std::vector<char> in_range(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    in_range[i] = level.contains(instances[i].diagonal());
  }
  for (int y = 0; y < map_h; ++y) {
    const int py = static_cast<int>(std::floor((y + 0.5) * s));
    if (py >= image_h) break;
    for (int x = 0; x < map_w; ++x) {
      const int px = static_cast<int>(std::floor((x + 0.5) * s));
      if (px >= image_w) break;
      const std::int32_t k = owner[static_cast<std::size_t>(py) * image_w + px];
      if (k < 0) continue;
      if (!in_range[k]) {
        ignore.set(y, x, true);
        continue;
      }
      const Box& b = instances[k].box;
      regression.set(y, x,
                     {static_cast<float>(b.cx / s - (x + 0.5)),
                      static_cast<float>(b.cy / s - (y + 0.5)),
                      static_cast<float>(b.w / s), static_cast<float>(b.h / s)});
      objectness.at(y, x) = 1.0f;
    }
  }
  return {std::move(regression), std::move(objectness), rle_encode(ignore)};
}

}  // namespace

RegressionObjectnessTargets regression_objectness_targets(
    std::span<const GtInstance> instances, const LevelSizeRange& level,
    int map_h, int map_w) {
  const int image_h = image_height_of(instances);
  const int image_w = image_width_of(instances);
  const auto owner = thing_owner_raster(instances, image_h, image_w);
  return regression_from_owner(instances, owner, image_h, image_w, level, map_h,
                               map_w);
}

std::vector<OcpLevelTargets> ocp_targets(std::span<const GtInstance> instances,
                                         int image_h, int image_w,
                                         const CenterTargetConfig& config) {
  const auto owner = thing_owner_raster(instances, image_h, image_w);
  auto levels = level_ranges();
  std::reverse(levels.begin(), levels.end());
  std::vector<OcpLevelTargets> out;
  for (const auto& level : levels) {
    const int map_h = level_extent(image_h, level.stride);
    const int map_w = level_extent(image_w, level.stride);
    auto reg = regression_from_owner(instances, owner, image_h, image_w, level,
                                     map_h, map_w);
    out.push_back({level.stride,
                   center_targets(instances, level, map_h, map_w, config),
                   std::move(reg.regression), std::move(reg.objectness),
                   std::move(reg.ignore)});
  }
  return out;
}

}  // namespace ocseg
