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

// Mask prediction from refined queries. Thing masks are the query/feature
// correlation restricted to the dilated predicted box; stuff masks use the
// correlation everywhere.

#include <optional>
#include <span>
#include <vector>

#include "ocseg/geometry.hpp"
#include "ocseg/kernels.hpp"
#include "ocseg/prediction.hpp"
#include "ocseg/rasters.hpp"

namespace ocseg {

// Linear projection applied to a content query before correlation.
// Serialized as a tensor of shape (out_dim, in_dim + 1, 1): each row holds
// the weights followed by the bias.
class MaskProjection {
 public:
  MaskProjection() = default;
  MaskProjection(int in_dim, int out_dim, std::vector<float> weight,
                 std::vector<float> bias);

  static MaskProjection identity(int dim);
  static MaskProjection from_tensor(const FeatureMap& tensor);
  FeatureMap to_tensor() const;

  int in_dim() const { return in_dim_; }
  int out_dim() const { return out_dim_; }

  std::vector<float> apply(std::span<const float> query) const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  std::vector<float> weight_;  // out_dim x in_dim, row-major
  std::vector<float> bias_;
};

enum class Upsample { kBilinear, kNearest };

struct MaskDecodeConfig {
  DilationConfig dilation;
  float threshold = 0.5f;
  Upsample upsample = Upsample::kBilinear;
};

// Cells of a stride-s grid whose centers fall inside a pixel box (inclusive
// edges), clipped to the grid.
kernels::CellRect box_cells(const Box& pixel_box, int stride, int grid_h,
                            int grid_w);

struct ThingMask {
  ScalarMap probs;
  bool empty_box = false;  // dilated box covers no cell
};

ThingMask thing_mask(const FeatureMap& features_p4, std::span<const float> query,
                     const Box& query_box, const MaskProjection& projection,
                     int image_w, int image_h,
                     const DilationConfig& dilation = {});

ScalarMap stuff_mask(const FeatureMap& features_p4, std::span<const float> query,
                     const MaskProjection& projection);

struct TargetSize {
  int height = 0;
  int width = 0;
};

// Thresholds probabilities (> tau). With a target size the grid is first
// upsampled to it (bilinear on probabilities, or nearest cell).
BinaryMask binarize(const ScalarMap& probs, float tau = 0.5f,
                    std::optional<TargetSize> target = std::nullopt,
                    Upsample mode = Upsample::kBilinear);

InstancePrediction predict_thing(const FeatureMap& features_p4,
                                 std::span<const float> query,
                                 const Box& query_box,
                                 std::vector<float> class_probs,
                                 const MaskProjection& projection, int image_w,
                                 int image_h, const DilationConfig& dilation = {});

InstancePrediction predict_stuff(const FeatureMap& features_p4,
                                 std::span<const float> query,
                                 std::vector<float> class_probs,
                                 const MaskProjection& projection);

}  // namespace ocseg
