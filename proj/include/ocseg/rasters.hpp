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

// Dense grids shared by every stage: feature maps, scalar maps, regression
// maps, binary masks (dense and run-length encoded) and panoptic maps.
//
// Layout is row-major and channel-last. A cell (y, x) at stride s sits at
// pixel coordinate ((x + 0.5) * s, (y + 0.5) * s).

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ocseg/geometry.hpp"

namespace ocseg {

class FeatureMap {
 public:
  FeatureMap() = default;
  FeatureMap(int stride, int height, int width, int channels);
  FeatureMap(int stride, int height, int width, int channels,
             std::vector<float> data);

  int stride() const { return stride_; }
  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(height_) * width_;
  }

  float at(int y, int x, int c) const { return data_[index(y, x) + c]; }
  float& at(int y, int x, int c) { return data_[index(y, x) + c]; }

  std::span<const float> cell(int y, int x) const {
    return {data_.data() + index(y, x), static_cast<std::size_t>(channels_)};
  }
  std::span<float> cell(int y, int x) {
    return {data_.data() + index(y, x), static_cast<std::size_t>(channels_)};
  }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool operator==(const FeatureMap&) const = default;

 private:
  std::size_t index(int y, int x) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_;
  }

  int stride_ = 1;
  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

// One value per cell: heatmaps, objectness, probability masks.
class ScalarMap {
 public:
  ScalarMap() = default;
  ScalarMap(int stride, int height, int width, float fill = 0.0f);
  ScalarMap(int stride, int height, int width, std::vector<float> data);

  int stride() const { return stride_; }
  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  float at(int y, int x) const { return data_[index(y, x)]; }
  float& at(int y, int x) { return data_[index(y, x)]; }

  std::span<const float> data() const { return data_; }
  std::span<float> data() { return data_; }

  bool is_probability() const;

  FeatureMap as_feature_map() const;
  static ScalarMap from_feature_map(const FeatureMap& map);

  bool operator==(const ScalarMap&) const = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int stride_ = 1;
  int height_ = 0;
  int width_ = 0;
  std::vector<float> data_;
};

// Offsets (dx, dy) from the cell center to the object center and the object
// size (w, h), all in cells of this map.
struct RegressionCell {
  float dx = 0.0f;
  float dy = 0.0f;
  float w = 0.0f;
  float h = 0.0f;

  bool operator==(const RegressionCell&) const = default;
};

class RegressionMap {
 public:
  RegressionMap() = default;
  RegressionMap(int stride, int height, int width);
  explicit RegressionMap(FeatureMap raw);

  int stride() const { return raw_.stride(); }
  int height() const { return raw_.height(); }
  int width() const { return raw_.width(); }

  RegressionCell at(int y, int x) const;
  void set(int y, int x, const RegressionCell& cell);

  const FeatureMap& raw() const { return raw_; }

  bool operator==(const RegressionMap&) const = default;

 private:
  FeatureMap raw_;
};

// Dense 0/1 grid.
class MaskGrid {
 public:
  MaskGrid() = default;
  MaskGrid(int height, int width, bool fill = false);
  MaskGrid(int height, int width, std::vector<std::uint8_t> data);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t size() const { return data_.size(); }

  bool at(int y, int x) const { return data_[index(y, x)] != 0; }
  void set(int y, int x, bool v) { data_[index(y, x)] = v ? 1 : 0; }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::int64_t area() const;

  // Tight pixel box over the set cells; empty grid has no box.
  std::optional<Box> tight_box() const;

  bool operator==(const MaskGrid&) const = default;

 private:
  std::size_t index(int y, int x) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<std::uint8_t> data_;
};

struct Run {
  std::int64_t start = 0;
  std::int64_t length = 0;

  bool operator==(const Run&) const = default;
};

// Run-length encoded binary mask over row-major order. Runs are sorted,
// positive-length, non-overlapping and inside the grid.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int height, int width, std::vector<Run> runs);

  int height() const { return height_; }
  int width() const { return width_; }
  const std::vector<Run>& runs() const { return runs_; }
  std::int64_t area() const;
  bool empty() const { return runs_.empty(); }

  bool operator==(const BinaryMask&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<Run> runs_;
};

BinaryMask rle_encode(const MaskGrid& mask);
MaskGrid rle_decode(const BinaryMask& mask);

// Samples a full-resolution mask onto a stride-s grid of the given size using
// the pixel under each cell center. Pixels outside the source read as 0.
MaskGrid sample_cells(const MaskGrid& mask, int stride, int grid_h, int grid_w);

// Bilinear read at continuous cell coordinates, exact on integer
// coordinates. Throws kInvalidArgument outside [0, width) x [0, height).
std::vector<float> bilinear_read(const FeatureMap& map, double x, double y);

struct SegmentInfo {
  int class_id = 0;
  bool is_thing = false;

  bool operator==(const SegmentInfo&) const = default;
};

// Per-pixel segment ids (0 = void) with a segment table. Every nonzero pixel
// id must appear in the table and table ids are positive.
class PanopticMap {
 public:
  PanopticMap() = default;
  PanopticMap(int height, int width, std::vector<std::int32_t> ids,
              std::map<std::int32_t, SegmentInfo> segments);

  int height() const { return height_; }
  int width() const { return width_; }
  std::span<const std::int32_t> ids() const { return ids_; }
  std::int32_t at(int y, int x) const {
    return ids_[static_cast<std::size_t>(y) * width_ + x];
  }
  const std::map<std::int32_t, SegmentInfo>& segments() const {
    return segments_;
  }

  MaskGrid segment_mask(std::int32_t id) const;

  bool operator==(const PanopticMap&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<std::int32_t> ids_;
  std::map<std::int32_t, SegmentInfo> segments_;
};

// Throws kInvalidArgument when a pixel id is missing from the table.
void validate(const PanopticMap& map);

}  // namespace ocseg
