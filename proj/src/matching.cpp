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

#include "ocseg/matching.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>

#include "ocseg/error.hpp"
#include "ocseg/hungarian.hpp"

namespace ocseg {
namespace {

using GridKey = std::tuple<int, int, int>;  // stride, height, width

GridKey grid_key(const ScalarMap& m) { return {m.stride(), m.height(), m.width()}; }

std::vector<int> thing_indices(std::span<const InstancePrediction> preds) {
  std::vector<int> out;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].is_thing) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> thing_indices(std::span<const GtInstance> gts) {
  std::vector<int> out;
  for (std::size_t i = 0; i < gts.size(); ++i) {
    if (gts[i].is_thing) out.push_back(static_cast<int>(i));
  }
  return out;
}

double box_iou(const InstancePrediction& p, const GtInstance& g) {
  return iou(p.box, gt_box_normalized(g));
}

void fill_unmatched(MatchSet& set, std::span<const InstancePrediction> preds,
                    std::span<const GtInstance> gts) {
  std::vector<char> q_used(preds.size(), 0), g_used(gts.size(), 0);
  for (const Match& m : set.matches) {
    if (m.stage == MatchStage::kRemovedStage1) continue;
    q_used[m.query] = 1;
    g_used[m.gt] = 1;
  }
  set.unmatched_queries.clear();
  set.unmatched_gts.clear();
  for (const int q : thing_indices(preds)) {
    if (!q_used[q]) set.unmatched_queries.push_back(q);
  }
  for (const int g : thing_indices(gts)) {
    if (!g_used[g]) set.unmatched_gts.push_back(g);
  }
}

}  // namespace

CostMatrix build_cost(std::span<const InstancePrediction> preds,
                      std::span<const GtInstance> gts,
                      const LossWeights& weights) {
  CostMatrix m;
  m.rows = static_cast<int>(preds.size());
  m.cols = static_cast<int>(gts.size());
  m.weights = weights;
  const std::size_t n = static_cast<std::size_t>(m.rows) * m.cols;
  m.cls.assign(n, 0.0);
  m.mask.assign(n, 0.0);
  m.box.assign(n, 0.0);
  m.total.assign(n, 0.0);

  // GT masks resampled once per distinct prediction grid.
  std::map<GridKey, std::vector<MaskGrid>> gt_grids;
  for (const auto& p : preds) {
    auto [it, inserted] = gt_grids.try_emplace(grid_key(p.mask));
    if (!inserted) continue;
    for (const auto& g : gts) it->second.push_back(gt_mask_on_grid(g, p.mask));
  }
  std::vector<Box> gt_boxes;
  for (const auto& g : gts) gt_boxes.push_back(gt_box_normalized(g));

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < m.rows; ++i) {
    const auto& p = preds[i];
    const auto& grids = gt_grids.at(grid_key(p.mask));
    for (int j = 0; j < m.cols; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * m.cols + j;
      const int c = gts[j].class_id;
      const double y = (c >= 0 && static_cast<std::size_t>(c) < p.class_probs.size())
                           ? p.class_probs[c]
                           : 0.0;
      m.cls[k] = 1.0 - y;
      m.mask[k] = mask_loss(p.mask, grids[j]).total();
      m.box[k] = box_loss(p.box, gt_boxes[j]).total();
      m.total[k] = weights.cls * m.cls[k] + weights.mask * m.mask[k] +
                   weights.box * m.box[k];
    }
  }
  return m;
}

const char* stage_name(MatchStage stage) {
  switch (stage) {
    case MatchStage::kBase: return "base";
    case MatchStage::kRemovedStage1: return "removed_stage1";
    case MatchStage::kAddedStage2: return "added_stage2";
  }
  return "unknown";
}

std::vector<Match> MatchSet::active() const {
  std::vector<Match> out;
  for (const Match& m : matches) {
    if (m.stage != MatchStage::kRemovedStage1) out.push_back(m);
  }
  return out;
}

void validate(const RefinementThresholds& t) {
  if (!(t.theta_fp >= 0.0 && t.theta_fp < t.theta_fn && t.theta_fn <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "refinement thresholds need 0 <= theta_fp < theta_fn <= 1");
  }
}

MatchSet base_match(std::span<const InstancePrediction> preds,
                    std::span<const GtInstance> gts, const LossWeights& weights) {
  const auto qi = thing_indices(preds);
  const auto gi = thing_indices(gts);
  std::vector<InstancePrediction> q_sub;
  std::vector<GtInstance> g_sub;
  for (const int q : qi) q_sub.push_back(preds[q]);
  for (const int g : gi) g_sub.push_back(gts[g]);

  const CostMatrix cost = build_cost(q_sub, g_sub, weights);
  const Assignment a = hungarian(cost.total, cost.rows, cost.cols);
  MatchSet out;
  for (int r = 0; r < cost.rows; ++r) {
    const int c = a.row_to_col[r];
    if (c < 0) continue;
    out.matches.push_back(
        {qi[r], gi[c], box_iou(q_sub[r], g_sub[c]), MatchStage::kBase});
  }
  fill_unmatched(out, preds, gts);
  return out;
}

double mask_iou(const InstancePrediction& pred, const GtInstance& gt) {
  const MaskGrid g = gt_mask_on_grid(gt, pred.mask);
  std::int64_t inter = 0, uni = 0;
  const auto probs = pred.mask.data();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const bool a = probs[k] > 0.5f;
    const bool b = g.data()[k] != 0;
    inter += a && b;
    uni += a || b;
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

MatchSet refine_matches(const MatchSet& base,
                        std::span<const InstancePrediction> preds,
                        std::span<const GtInstance> gts,
                        const RefinementThresholds& thresholds,
                        OverlapMode stage2_overlap) {
  validate(thresholds);
  MatchSet out;
  std::vector<char> matched(preds.size(), 0);
  for (Match m : base.matches) {
    if (m.query < 0 || static_cast<std::size_t>(m.query) >= preds.size() ||
        m.gt < 0 || static_cast<std::size_t>(m.gt) >= gts.size()) {
      throw Error(ErrorCode::kInvalidArgument, "match index out of range");
    }
    if (m.stage == MatchStage::kBase) {
      m.iou = box_iou(preds[m.query], gts[m.gt]);
      if (m.iou < thresholds.theta_fp) m.stage = MatchStage::kRemovedStage1;
    }
    if (m.stage != MatchStage::kRemovedStage1) matched[m.query] = 1;
    out.matches.push_back(m);
  }

  const auto gi = thing_indices(gts);
  for (const int q : thing_indices(preds)) {
    if (matched[q]) continue;
    int best = -1;
    double best_overlap = -1.0;
    for (const int g : gi) {
      const double o = stage2_overlap == OverlapMode::kBox
                           ? box_iou(preds[q], gts[g])
                           : mask_iou(preds[q], gts[g]);
      if (o > best_overlap) {
        best_overlap = o;
        best = g;
      }
    }
    if (best >= 0 && best_overlap > thresholds.theta_fn) {
      out.matches.push_back(
          {q, best, box_iou(preds[q], gts[best]), MatchStage::kAddedStage2});
      matched[q] = 1;
    }
  }
  fill_unmatched(out, preds, gts);
  return out;
}

std::vector<MaskConditionedQuery> mask_conditioned_queries(
    std::span<const GtInstance> gts, std::span<const FeatureMap> pyramid, int n,
    const BoxNoise& noise, Rng& rng, int max_n) {
  if (n < 0 || n > max_n) {
    throw Error(ErrorCode::kInvalidArgument,
                "mask-conditioned query count " + std::to_string(n) +
                    " outside [0, " + std::to_string(max_n) + "]");
  }
  std::vector<MaskConditionedQuery> out;
  if (n == 0) return out;
  if (gts.empty() || pyramid.empty()) {
    throw Error(ErrorCode::kSamplingFailed,
                "mask-conditioned sampling needs GT instances and feature levels");
  }
  const int levels = static_cast<int>(pyramid.size());
  // Cell lists per (gt, level), built on first use.
  std::vector<std::vector<std::vector<kernels::CellCoord>>> cells(gts.size());
  std::vector<std::vector<char>> built(gts.size(), std::vector<char>(levels, 0));
  for (auto& c : cells) c.resize(levels);
  const auto cells_of = [&](int g, int l) -> const std::vector<kernels::CellCoord>& {
    if (!built[g][l]) {
      const FeatureMap& f = pyramid[l];
      const MaskGrid grid =
          sample_cells(rle_decode(gts[g].mask), f.stride(), f.height(), f.width());
      for (int y = 0; y < grid.height(); ++y) {
        for (int x = 0; x < grid.width(); ++x) {
          if (grid.at(y, x)) cells[g][l].push_back({y, x});
        }
      }
      built[g][l] = 1;
    }
    return cells[g][l];
  };

  for (int k = 0; k < n; ++k) {
    const int g = rng.uniform_index(static_cast<int>(gts.size()));
    std::vector<int> remaining(levels);
    std::iota(remaining.begin(), remaining.end(), 0);
    int level = -1;
    while (!remaining.empty()) {
      const int pick = rng.uniform_index(static_cast<int>(remaining.size()));
      if (!cells_of(g, remaining[pick]).empty()) {
        level = remaining[pick];
        break;
      }
      remaining.erase(remaining.begin() + pick);
    }
    if (level < 0) {
      throw Error(ErrorCode::kSamplingFailed,
                  "GT " + std::to_string(g) + " covers no cell on any level");
    }
    const auto& candidates = cells_of(g, level);
    const auto cell = candidates[rng.uniform_index(static_cast<int>(candidates.size()))];

    MaskConditionedQuery q;
    q.gt = g;
    q.stride = pyramid[level].stride();
    q.cell = cell;
    q.content = bilinear_read(pyramid[level], cell.x, cell.y);
    const Box b = gt_box_normalized(gts[g]);
    q.box = b;
    q.box.cx = b.cx + rng.uniform(-noise.shift, noise.shift) * b.w / 2.0;
    q.box.cy = b.cy + rng.uniform(-noise.shift, noise.shift) * b.h / 2.0;
    q.box.w = b.w * rng.uniform(1.0 - noise.scale, 1.0 + noise.scale);
    q.box.h = b.h * rng.uniform(1.0 - noise.scale, 1.0 + noise.scale);
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<int> test_time_nms(std::span<const InstancePrediction> preds,
                               double iou_threshold) {
  std::vector<int> order(preds.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return preds[a].confidence() > preds[b].confidence();
  });
  std::vector<int> kept;
  for (const int i : order) {
    bool keep = true;
    for (const int k : kept) {
      if (iou(preds[i].box, preds[k].box) > iou_threshold) {
        keep = false;
        break;
      }
    }
    if (keep) kept.push_back(i);
  }
  return kept;
}

}  // namespace ocseg
