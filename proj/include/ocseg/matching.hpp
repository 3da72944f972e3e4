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

// Query/GT assignment: Hungarian matching on the class/mask/box cost, the
// two-stage box-overlap refinement, mask-conditioned training queries and
// test-time box NMS.

#include <cstdint>
#include <span>
#include <vector>

#include "ocseg/geometry.hpp"
#include "ocseg/losses.hpp"
#include "ocseg/prediction.hpp"
#include "ocseg/rasters.hpp"
#include "ocseg/rng.hpp"
#include "ocseg/targets.hpp"

namespace ocseg {

struct CostMatrix {
  int rows = 0;  // predictions
  int cols = 0;  // GT instances
  LossWeights weights;
  // Unweighted components and the weighted total, row-major.
  std::vector<double> cls, mask, box, total;

  double at(int i, int j) const { return total[static_cast<std::size_t>(i) * cols + j]; }
};

// total(i, j) = cls_w * (1 - y_i[class_j]) + mask_w * mask_loss + box_w * box_loss.
CostMatrix build_cost(std::span<const InstancePrediction> preds,
                      std::span<const GtInstance> gts,
                      const LossWeights& weights = {});

enum class MatchStage { kBase, kRemovedStage1, kAddedStage2 };
const char* stage_name(MatchStage stage);

struct Match {
  int query = 0;
  int gt = 0;
  double iou = 0.0;  // box IoU at match time
  MatchStage stage = MatchStage::kBase;

  bool operator==(const Match&) const = default;
};

// Removed matches stay in `matches` with their stage so the refinement can
// be audited; `active()` drops them.
struct MatchSet {
  std::vector<Match> matches;
  std::vector<int> unmatched_queries;
  std::vector<int> unmatched_gts;

  std::vector<Match> active() const;
  bool operator==(const MatchSet&) const = default;
};

struct RefinementThresholds {
  double theta_fp = 0.25;  // base matches with IoU below are removed
  double theta_fn = 0.80;  // unmatched queries with IoU above are added
};

void validate(const RefinementThresholds& t);

enum class OverlapMode { kBox, kMask };

// Hungarian matching between the thing predictions and thing GTs. Indices in
// the result refer to the full input lists; stuff entries are never matched
// or listed as unmatched.
MatchSet base_match(std::span<const InstancePrediction> preds,
                    std::span<const GtInstance> gts,
                    const LossWeights& weights = {});

// Stage 1 drops base matches with box IoU < theta_fp. Stage 2 gives every
// thing query left unmatched its single best-overlap GT if the overlap
// exceeds theta_fn (ties go to the lower GT index).
MatchSet refine_matches(const MatchSet& base,
                        std::span<const InstancePrediction> preds,
                        std::span<const GtInstance> gts,
                        const RefinementThresholds& thresholds = {},
                        OverlapMode stage2_overlap = OverlapMode::kBox);

// Binarized (> 0.5) prediction mask against the GT sampled on its grid.
double mask_iou(const InstancePrediction& pred, const GtInstance& gt);

struct BoxNoise {
  double shift = 0.4;  // center moves within +-shift * size / 2
  double scale = 0.4;  // size scales within [1 - scale, 1 + scale]
};

struct MaskConditionedQuery {
  std::vector<float> content;
  Box box;  // normalized
  int gt = 0;
  int stride = 0;
  kernels::CellCoord cell;
};

inline constexpr int kMaxMaskConditionedQueries = 100;

// Throws kInvalidArgument if n exceeds `max_n`, kSamplingFailed when a GT
// covers no cell center on any level.
std::vector<MaskConditionedQuery> mask_conditioned_queries(
    std::span<const GtInstance> gts, std::span<const FeatureMap> pyramid, int n,
    const BoxNoise& noise, Rng& rng, int max_n = kMaxMaskConditionedQueries);

// Kept indices, by confidence descending (input order among ties). A
// prediction survives if its box IoU with every kept box is <= iou_threshold.
std::vector<int> test_time_nms(std::span<const InstancePrediction> preds,
                               double iou_threshold = 0.7);

}  // namespace ocseg
