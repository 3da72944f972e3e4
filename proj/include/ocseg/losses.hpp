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

// Scalar loss evaluators used for matching costs, diagnostics and tests.
// Nothing here is differentiable; these are plain value functions.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ocseg/geometry.hpp"
#include "ocseg/prediction.hpp"
#include "ocseg/rasters.hpp"
#include "ocseg/targets.hpp"

namespace ocseg {

struct LossWeights {
  double obj = 5.0;
  double reg = 5.0;
  double center = 5.0;
  double cls = 4.0;
  double mask = 5.0;
  double box = 5.0;
};

// Conventional focal constants.
struct FocalParams {
  double alpha = 0.25;
  double gamma = 2.0;
};

inline constexpr double kProbClamp = 1e-6;

double clamp_probability(double p);
double binary_cross_entropy(double p, double target);
double focal_term(double p, double target, const FocalParams& params);

struct LossValue {
  double value = 0.0;
  bool no_valid_pixels = false;  // every pixel ignored; value is 0
};

// Mean focal term over non-ignored cells. `ignore` may be default-constructed
// (0x0) for "nothing ignored".
LossValue focal_loss(const ScalarMap& pred, const ScalarMap& target,
                     const BinaryMask& ignore, const FocalParams& params = {});

// Mean over supervised cells (objectness target 1 and not ignored) of the
// summed absolute difference of the four regression channels.
LossValue regression_l1_loss(const RegressionMap& pred,
                             const RegressionMap& target,
                             const ScalarMap& objectness_target,
                             const BinaryMask& ignore);

struct MaskLossTerms {
  double bce = 0.0;
  double dice = 0.0;
  double total() const { return bce + dice; }
};

// Mean clamped BCE plus 1 - (2 sum(pg) + 1) / (sum(p) + sum(g) + 1).
MaskLossTerms mask_loss(const ScalarMap& pred, const MaskGrid& gt);

struct BoxLossTerms {
  double l1 = 0.0;    // summed over cx, cy, w, h
  double giou = 0.0;  // 1 - giou
  double total() const { return l1 + giou; }
};

BoxLossTerms box_loss(const Box& pred, const Box& gt);

// GT mask resampled onto a prediction's grid (pixel under each cell center).
MaskGrid gt_mask_on_grid(const GtInstance& gt, const ScalarMap& grid);
// GT box in normalized image units.
Box gt_box_normalized(const GtInstance& gt);

// Sigmoid focal loss over all classes against a one-hot target; nullopt
// means "no object" (all-zero target).
double class_focal_loss(std::span<const float> class_probs,
                        std::optional<int> target_class,
                        const FocalParams& params = {});

struct OcpLevelPrediction {
  ScalarMap center;
  RegressionMap regression;
  ScalarMap objectness;
};

struct OcpLossTerms {
  double obj = 0.0;
  double reg = 0.0;
  double center = 0.0;
  double total = 0.0;
};

// Objectness and regression honor the ignore mask; centers do not, so
// out-of-range centers are pushed to 0.
OcpLossTerms ocp_level_loss(const OcpLevelPrediction& pred,
                            const OcpLevelTargets& target,
                            const LossWeights& weights,
                            const FocalParams& params = {});

struct PredictionLossTerms {
  double cls = 0.0;
  double mask = 0.0;
  double box = 0.0;
  double total = 0.0;
};

// One decoder layer. `matches` pairs prediction index with GT index; the
// same GT may appear several times. Class loss sums over all predictions
// (unmatched ones target "no object") divided by max(1, matches); mask and
// box terms are means over matches.
PredictionLossTerms prediction_loss(
    std::span<const InstancePrediction> preds, std::span<const GtInstance> gts,
    std::span<const std::pair<int, int>> matches, const LossWeights& weights,
    const FocalParams& params = {});

// Sum of per-level proposal losses and per-layer prediction losses.
double total_loss(std::span<const OcpLossTerms> levels,
                  std::span<const PredictionLossTerms> layers);

}  // namespace ocseg
