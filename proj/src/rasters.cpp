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

#include "ocseg/rasters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

void require_dims(int height, int width) {
  if (height < 0 || width < 0) {
    throw Error(ErrorCode::kInvalidArgument, "negative grid dimensions");
  }
}

void require_size(std::size_t actual, std::size_t expected, const char* what) {
  if (actual != expected) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": expected " + std::to_string(expected) +
                    " values, got " + std::to_string(actual));
  }
}

}  // namespace

FeatureMap::FeatureMap(int stride, int height, int width, int channels)
    : FeatureMap(stride, height, width, channels,
                 std::vector<float>(static_cast<std::size_t>(std::max(height, 0)) *
                                        std::max(width, 0) * std::max(channels, 0),
                                    0.0f)) {}

FeatureMap::FeatureMap(int stride, int height, int width, int channels,
                       std::vector<float> data)
    : stride_(stride),
      height_(height),
      width_(width),
      channels_(channels),
      data_(std::move(data)) {
  require_dims(height, width);
  if (channels < 0 || stride < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad stride or channel count");
  }
  require_size(data_.size(),
               static_cast<std::size_t>(height) * width * channels,
               "feature map");
}

ScalarMap::ScalarMap(int stride, int height, int width, float fill)
    : ScalarMap(stride, height, width,
                std::vector<float>(static_cast<std::size_t>(std::max(height, 0)) *
                                       std::max(width, 0),
                                   fill)) {}

ScalarMap::ScalarMap(int stride, int height, int width, std::vector<float> data)
    : stride_(stride), height_(height), width_(width), data_(std::move(data)) {
  require_dims(height, width);
  if (stride < 1) throw Error(ErrorCode::kInvalidArgument, "bad stride");
  require_size(data_.size(), static_cast<std::size_t>(height) * width,
               "scalar map");
}

bool ScalarMap::is_probability() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](float v) { return v >= 0.0f && v <= 1.0f; });
}

FeatureMap ScalarMap::as_feature_map() const {
  return FeatureMap(stride_, height_, width_, 1, data_);
}

ScalarMap ScalarMap::from_feature_map(const FeatureMap& map) {
  if (map.channels() != 1) {
    throw Error(ErrorCode::kShapeMismatch,
                "scalar map needs 1 channel, got " +
                    std::to_string(map.channels()));
  }
  return ScalarMap(map.stride(), map.height(), map.width(),
                   std::vector<float>(map.data().begin(), map.data().end()));
}

RegressionMap::RegressionMap(int stride, int height, int width)
    : raw_(stride, height, width, 4) {}

RegressionMap::RegressionMap(FeatureMap raw) : raw_(std::move(raw)) {
  if (raw_.channels() != 4) {
    throw Error(ErrorCode::kShapeMismatch,
                "regression map needs 4 channels, got " +
                    std::to_string(raw_.channels()));
  }
}

RegressionCell RegressionMap::at(int y, int x) const {
  const auto c = raw_.cell(y, x);
  return {c[0], c[1], c[2], c[3]};
}

void RegressionMap::set(int y, int x, const RegressionCell& cell) {
  auto c = raw_.cell(y, x);
  c[0] = cell.dx;
  c[1] = cell.dy;
  c[2] = cell.w;
  c[3] = cell.h;
}

MaskGrid::MaskGrid(int height, int width, bool fill)
    : MaskGrid(height, width,
               std::vector<std::uint8_t>(
                   static_cast<std::size_t>(std::max(height, 0)) * std::max(width, 0),
                   fill ? 1 : 0)) {}

MaskGrid::MaskGrid(int height, int width, std::vector<std::uint8_t> data)
    : height_(height), width_(width), data_(std::move(data)) {
  require_dims(height, width);
  require_size(data_.size(), static_cast<std::size_t>(height) * width, "mask");
  for (auto& v : data_) v = v ? 1 : 0;
}

std::int64_t MaskGrid::area() const {
  return std::count(data_.begin(), data_.end(), std::uint8_t{1});
}

std::optional<Box> MaskGrid::tight_box() const {
  int x0 = width_, y0 = height_, x1 = -1, y1 = -1;
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (!at(y, x)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 < 0) return std::nullopt;
  return from_corners({static_cast<double>(x0), static_cast<double>(y0),
                       static_cast<double>(x1 + 1), static_cast<double>(y1 + 1)},
                      Units::kPixels);
}

BinaryMask::BinaryMask(int height, int width, std::vector<Run> runs)
    : height_(height), width_(width), runs_(std::move(runs)) {
  require_dims(height, width);
  const std::int64_t total = static_cast<std::int64_t>(height) * width;
  std::int64_t end = 0;
  for (const Run& r : runs_) {
    if (r.length <= 0 || r.start < end || r.start + r.length > total) {
      throw Error(ErrorCode::kInvalidArgument,
                  "RLE runs must be sorted, non-overlapping, positive and "
                  "inside the mask");
    }
    end = r.start + r.length;
  }
}

std::int64_t BinaryMask::area() const {
  std::int64_t total = 0;
  for (const Run& r : runs_) total += r.length;
  return total;
}

BinaryMask rle_encode(const MaskGrid& mask) {
  std::vector<Run> runs;
  const auto data = mask.data();
  const auto n = static_cast<std::int64_t>(data.size());
  std::int64_t i = 0;
  while (i < n) {
    if (!data[i]) {
      ++i;
      continue;
    }
    const std::int64_t start = i;
    while (i < n && data[i]) ++i;
    runs.push_back({start, i - start});
  }
  return BinaryMask(mask.height(), mask.width(), std::move(runs));
}

MaskGrid rle_decode(const BinaryMask& mask) {
  MaskGrid grid(mask.height(), mask.width());
  auto data = grid.data();
  for (const Run& r : mask.runs()) {
    std::fill_n(data.begin() + r.start, r.length, std::uint8_t{1});
  }
  return grid;
}

MaskGrid sample_cells(const MaskGrid& mask, int stride, int grid_h, int grid_w) {
  MaskGrid out(grid_h, grid_w);
  for (int y = 0; y < grid_h; ++y) {
    const int py = static_cast<int>(std::floor((y + 0.5) * stride));
    if (py >= mask.height()) break;
    for (int x = 0; x < grid_w; ++x) {
      const int px = static_cast<int>(std::floor((x + 0.5) * stride));
      if (px >= mask.width()) break;
      out.set(y, x, mask.at(py, px));
    }
  }
  return out;
}

std::vector<float> bilinear_read(const FeatureMap& map, double x, double y) {
  if (!(x >= 0.0 && x < map.width() && y >= 0.0 && y < map.height())) {
    throw Error(ErrorCode::kInvalidArgument,
                "bilinear read outside the feature map");
  }
  const int x0 = static_cast<int>(std::floor(x));
  const int y0 = static_cast<int>(std::floor(y));
  const int x1 = std::min(x0 + 1, map.width() - 1);
  const int y1 = std::min(y0 + 1, map.height() - 1);
  const double fx = x - x0;
  const double fy = y - y0;
  std::vector<float> out(static_cast<std::size_t>(map.channels()));
  for (int c = 0; c < map.channels(); ++c) {
    const double top = (1.0 - fx) * map.at(y0, x0, c) + fx * map.at(y0, x1, c);
    const double bottom = (1.0 - fx) * map.at(y1, x0, c) + fx * map.at(y1, x1, c);
    out[c] = static_cast<float>((1.0 - fy) * top + fy * bottom);
  }
  return out;
}

PanopticMap::PanopticMap(int height, int width, std::vector<std::int32_t> ids,
                         std::map<std::int32_t, SegmentInfo> segments)
    : height_(height),
      width_(width),
      ids_(std::move(ids)),
      segments_(std::move(segments)) {
  require_dims(height, width);
  require_size(ids_.size(), static_cast<std::size_t>(height) * width,
               "panoptic map");
  validate(*this);
}

MaskGrid PanopticMap::segment_mask(std::int32_t id) const {
  MaskGrid out(height_, width_);
  auto data = out.data();
  for (std::size_t i = 0; i < ids_.size(); ++i) data[i] = ids_[i] == id;
  return out;
}

void validate(const PanopticMap& map) {
  for (const auto& [id, info] : map.segments()) {
    if (id <= 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "segment table ids must be positive");
    }
  }
  for (const std::int32_t id : map.ids()) {
    if (id != 0 && !map.segments().contains(id)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pixel id " + std::to_string(id) +
                      " missing from the segment table");
    }
  }
}

}  // namespace ocseg
