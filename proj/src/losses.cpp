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

#include "ocseg/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

void require_same_grid(int h0, int w0, int h1, int w1, const char* what) {
  if (h0 != h1 || w0 != w1) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string(what) + ": grids differ (" + std::to_string(h0) +
                    "x" + std::to_string(w0) + " vs " + std::to_string(h1) +
                    "x" + std::to_string(w1) + ")");
  }
}

// Dense ignore flags; an empty (0x0) mask means nothing is ignored.
MaskGrid ignore_grid(const BinaryMask& ignore, int h, int w) {
  if (ignore.height() == 0 && ignore.width() == 0) return MaskGrid(h, w);
  require_same_grid(ignore.height(), ignore.width(), h, w, "ignore mask");
  return rle_decode(ignore);
}

}  // namespace

double clamp_probability(double p) {
  return std::clamp(p, kProbClamp, 1.0 - kProbClamp);
}

double binary_cross_entropy(double p, double target) {
  const double q = clamp_probability(p);
  return -(target * std::log(q) + (1.0 - target) * std::log(1.0 - q));
}

double focal_term(double p, double target, const FocalParams& params) {
  const double q = clamp_probability(p);
  const double pos = -params.alpha * target * std::pow(1.0 - q, params.gamma) *
                     std::log(q);
  const double neg = -(1.0 - params.alpha) * (1.0 - target) *
                     std::pow(q, params.gamma) * std::log(1.0 - q);
  return pos + neg;
}

LossValue focal_loss(const ScalarMap& pred, const ScalarMap& target,
                     const BinaryMask& ignore, const FocalParams& params) {
  require_same_grid(pred.height(), pred.width(), target.height(), target.width(),
                    "focal loss");
  const MaskGrid skip = ignore_grid(ignore, pred.height(), pred.width());
  double sum = 0.0;
  std::int64_t n = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (skip.data()[i]) continue;
    sum += focal_term(pred.data()[i], target.data()[i], params);
    ++n;
  }
  if (n == 0) return {0.0, true};
  return {sum / static_cast<double>(n), false};
}

LossValue regression_l1_loss(const RegressionMap& pred,
                             const RegressionMap& target,
                             const ScalarMap& objectness_target,
                             const BinaryMask& ignore) {
  require_same_grid(pred.height(), pred.width(), target.height(), target.width(),
                    "regression loss");
  require_same_grid(pred.height(), pred.width(), objectness_target.height(),
                    objectness_target.width(), "regression loss");
  const MaskGrid skip = ignore_grid(ignore, pred.height(), pred.width());
  double sum = 0.0;
  std::int64_t n = 0;
  for (int y = 0; y < pred.height(); ++y) {
    for (int x = 0; x < pred.width(); ++x) {
      if (skip.at(y, x) || objectness_target.at(y, x) < 0.5f) continue;
      const auto p = pred.at(y, x);
      const auto t = target.at(y, x);
      sum += std::abs(static_cast<double>(p.dx) - t.dx) +
             std::abs(static_cast<double>(p.dy) - t.dy) +
             std::abs(static_cast<double>(p.w) - t.w) +
             std::abs(static_cast<double>(p.h) - t.h);
      ++n;
    }
  }
  if (n == 0) return {0.0, true};
  return {sum / static_cast<double>(n), false};
}

MaskLossTerms mask_loss(const ScalarMap& pred, const MaskGrid& gt) {
  require_same_grid(pred.height(), pred.width(), gt.height(), gt.width(),
                    "mask loss");
  if (pred.size() == 0) return {};
  double bce = 0.0, inter = 0.0, psum = 0.0, gsum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = pred.data()[i];
    const double g = gt.data()[i];
    bce += binary_cross_entropy(p, g);
    inter += p * g;
    psum += p;
    gsum += g;
  }
  return {bce / static_cast<double>(pred.size()),
          1.0 - (2.0 * inter + 1.0) / (psum + gsum + 1.0)};
}

BoxLossTerms box_loss(const Box& pred, const Box& gt) {
  const double g = giou(pred, gt);
  return {std::abs(pred.cx - gt.cx) + std::abs(pred.cy - gt.cy) +
              std::abs(pred.w - gt.w) + std::abs(pred.h - gt.h),
          1.0 - g};
}

MaskGrid gt_mask_on_grid(const GtInstance& gt, const ScalarMap& grid) {
  const MaskGrid full = rle_decode(gt.mask);
  if (grid.stride() == 1 && grid.height() == full.height() &&
      grid.width() == full.width()) {
    return full;
  }
  return sample_cells(full, grid.stride(), grid.height(), grid.width());
}

Box gt_box_normalized(const GtInstance& gt) {
  return to_normalized(gt.box, gt.mask.width(), gt.mask.height());
}

double class_focal_loss(std::span<const float> class_probs,
                        std::optional<int> target_class,
                        const FocalParams& params) {
  double sum = 0.0;
  for (std::size_t c = 0; c < class_probs.size(); ++c) {
    const double t =
        (target_class && static_cast<std::size_t>(*target_class) == c) ? 1.0 : 0.0;
    sum += focal_term(class_probs[c], t, params);
  }
  return sum;
}

OcpLossTerms ocp_level_loss(const OcpLevelPrediction& pred,
                            const OcpLevelTargets& target,
                            const LossWeights& weights,
                            const FocalParams& params) {
  OcpLossTerms out;
  out.obj = focal_loss(pred.objectness, target.objectness, target.ignore, params)
                .value;
  out.reg = regression_l1_loss(pred.regression, target.regression,
                               target.objectness, target.ignore)
                .value;
  out.center = focal_loss(pred.center, target.center, BinaryMask(), params).value;
  out.total = weights.obj * out.obj + weights.reg * out.reg +
              weights.center * out.center;
  return out;
}

PredictionLossTerms prediction_loss(
    std::span<const InstancePrediction> preds, std::span<const GtInstance> gts,
    std::span<const std::pair<int, int>> matches, const LossWeights& weights,
    const FocalParams& params) {
  std::vector<std::optional<int>> target(preds.size());
  for (const auto& [q, g] : matches) {
    if (q < 0 || static_cast<std::size_t>(q) >= preds.size() || g < 0 ||
        static_cast<std::size_t>(g) >= gts.size()) {
      throw Error(ErrorCode::kInvalidArgument, "match index out of range");
    }
    target[q] = gts[g].class_id;
  }
  PredictionLossTerms out;
  const double norm = std::max<double>(1.0, static_cast<double>(matches.size()));
  for (std::size_t q = 0; q < preds.size(); ++q) {
    out.cls += class_focal_loss(preds[q].class_probs, target[q], params);
  }
  out.cls /= norm;
  for (const auto& [q, g] : matches) {
    const auto& p = preds[q];
    out.mask += mask_loss(p.mask, gt_mask_on_grid(gts[g], p.mask)).total();
    out.box += box_loss(p.box, gt_box_normalized(gts[g])).total();
  }
  if (!matches.empty()) {
    out.mask /= static_cast<double>(matches.size());
    out.box /= static_cast<double>(matches.size());
  }
  out.total = weights.cls * out.cls + weights.mask * out.mask +
              weights.box * out.box;
  return out;
}

double total_loss(std::span<const OcpLossTerms> levels,
                  std::span<const PredictionLossTerms> layers) {
  double sum = 0.0;
  for (const auto& l : levels) sum += l.total;
  for (const auto& l : layers) sum += l.total;
  return sum;
}

}  // namespace ocseg
