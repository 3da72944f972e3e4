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

#include "ocseg/ocp_decode.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

constexpr std::array<int, 5> kStrides = {4, 8, 16, 32, 64};

bool same_grid(const OcpLevelHeads& l) {
  const int h = l.center.height(), w = l.center.width();
  return l.regression.height() == h && l.regression.width() == w &&
         l.objectness.height() == h && l.objectness.width() == w &&
         l.features.height() == h && l.features.width() == w;
}

}  // namespace

std::vector<kernels::Peak> heatmap_nms(const ScalarMap& center, int window,
                                       float floor) {
  if (window < 1) throw Error(ErrorCode::kInvalidArgument, "NMS window < 1");
  auto peaks = kernels::omp::window_peaks(center, window, floor);
  // Peaks arrive in row-major order; a stable sort keeps it among ties.
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const auto& a, const auto& b) { return a.prob > b.prob; });
  return peaks;
}

std::vector<RankedPeak> rank_and_select(std::span<const LevelPeaks> levels,
                                        std::size_t n_max) {
  std::vector<RankedPeak> all;
  for (const auto& level : levels) {
    for (const auto& p : level.peaks) all.push_back({level.stride, p});
  }
  std::sort(all.begin(), all.end(), [](const RankedPeak& a, const RankedPeak& b) {
    if (a.peak.prob != b.peak.prob) return a.peak.prob > b.peak.prob;
    if (a.stride != b.stride) return a.stride < b.stride;
    if (a.peak.y != b.peak.y) return a.peak.y < b.peak.y;
    return a.peak.x < b.peak.x;
  });
  if (all.size() > n_max) all.resize(n_max);
  return all;
}

PositionalQuery positional_query(const RegressionMap& reg,
                                 kernels::CellCoord cell, int image_w,
                                 int image_h) {
  if (cell.y < 0 || cell.y >= reg.height() || cell.x < 0 || cell.x >= reg.width()) {
    throw Error(ErrorCode::kInvalidArgument, "proposal cell outside the map");
  }
  const RegressionCell r = reg.at(cell.y, cell.x);
  const double s = reg.stride();
  PositionalQuery out;
  double w = r.w, h = r.h;
  if (w < 0.0 || h < 0.0) {
    out.clamped = true;
    w = std::max(w, 0.0);
    h = std::max(h, 0.0);
  }
  Box px{(cell.x + 0.5 + static_cast<double>(r.dx)) * s,
         (cell.y + 0.5 + static_cast<double>(r.dy)) * s, w * s, h * s,
         Units::kPixels};
  Box norm = to_normalized(px, image_w, image_h);
  if (norm.cx < 0.0 || norm.cx > 1.0 || norm.cy < 0.0 || norm.cy > 1.0) {
    out.clamped = true;
    norm.cx = std::clamp(norm.cx, 0.0, 1.0);
    norm.cy = std::clamp(norm.cy, 0.0, 1.0);
  }
  out.box = norm;
  return out;
}

double voting_threshold(int map_width, double fraction) {
  return fraction * map_width;
}

std::vector<BinaryMask> instance_voting(const RegressionMap& reg,
                                        std::span<const kernels::CellCoord> cells,
                                        double theta) {
  std::vector<std::int32_t> owner(static_cast<std::size_t>(reg.height()) *
                                  reg.width());
  kernels::omp::nearest_center_vote(reg, cells, theta, owner);
  std::vector<MaskGrid> grids(cells.size(), MaskGrid(reg.height(), reg.width()));
  for (std::size_t j = 0; j < owner.size(); ++j) {
    if (owner[j] >= 0) grids[owner[j]].data()[j] = 1;
  }
  std::vector<BinaryMask> out;
  out.reserve(grids.size());
  for (const auto& g : grids) out.push_back(rle_encode(g));
  return out;
}

ContentQuery content_query(const FeatureMap& features,
                           const ScalarMap& objectness, const BinaryMask& mask,
                           bool normalize) {
  if (objectness.height() != features.height() ||
      objectness.width() != features.width() ||
      mask.height() != features.height() || mask.width() != features.width()) {
    throw Error(ErrorCode::kShapeMismatch,
                "content pooling inputs disagree in size");
  }
  std::vector<float> weights(features.cell_count(), 0.0f);
  double total = 0.0;
  for (const Run& r : mask.runs()) {
    for (std::int64_t j = r.start; j < r.start + r.length; ++j) {
      weights[j] = objectness.data()[j];
      total += weights[j];
    }
  }
  ContentQuery out;
  out.vector.assign(static_cast<std::size_t>(features.channels()), 0.0f);
  if (total == 0.0) {
    out.empty_weight = true;
    return out;
  }
  const auto pooled = kernels::omp::weighted_pool(features, weights);
  const double scale = normalize ? 1.0 / total : 1.0;
  for (std::size_t c = 0; c < pooled.size(); ++c) {
    out.vector[c] = static_cast<float>(pooled[c] * scale);
  }
  return out;
}

QuerySet decode_all(std::span<const OcpLevelHeads> levels,
                    std::vector<std::vector<float>> stuff_queries, int image_h,
                    int image_w, const OcpDecodeConfig& config) {
  std::map<int, const OcpLevelHeads*> by_stride;
  for (const auto& level : levels) {
    if (!by_stride.emplace(level.stride, &level).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate level stride " + std::to_string(level.stride));
    }
    if (!same_grid(level)) {
      throw Error(ErrorCode::kShapeMismatch,
                  "heads of level " + std::to_string(level.stride) +
                      " disagree in size");
    }
  }
  for (const int s : kStrides) {
    if (!by_stride.contains(s)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "missing proposal level with stride " + std::to_string(s));
    }
  }
  if (by_stride.size() != kStrides.size()) {
    throw Error(ErrorCode::kInvalidArgument, "unexpected proposal level stride");
  }

  std::vector<LevelPeaks> peaks(kStrides.size());
  for (std::size_t i = 0; i < kStrides.size(); ++i) {
    peaks[i] = {kStrides[i], heatmap_nms(by_stride.at(kStrides[i])->center,
                                         config.nms_window, config.prob_floor)};
  }
  const auto ranked = rank_and_select(
      peaks, static_cast<std::size_t>(std::max(config.n_things, 0)));

  QuerySet out;
  out.stuff = std::move(stuff_queries);
  out.things.resize(ranked.size());

  // Voting competes among the kept proposals of the same level.
  for (const int s : kStrides) {
    const OcpLevelHeads& level = *by_stride.at(s);
    std::vector<std::size_t> members;
    std::vector<kernels::CellCoord> cells;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (ranked[i].stride != s) continue;
      members.push_back(i);
      cells.push_back({ranked[i].peak.y, ranked[i].peak.x});
    }
    if (members.empty()) continue;
    const double theta =
        voting_threshold(level.regression.width(), config.theta_fraction);
    auto masks = instance_voting(level.regression, cells, theta);
    for (std::size_t m = 0; m < members.size(); ++m) {
      Proposal& p = out.things[members[m]];
      p.stride = s;
      p.cell = cells[m];
      p.probability = ranked[members[m]].peak.prob;
      const auto pos = positional_query(level.regression, cells[m], image_w, image_h);
      p.box = pos.box;
      p.size_clamped = pos.clamped;
      auto content = content_query(level.features, level.objectness, masks[m],
                                   config.normalize_content);
      p.content = std::move(content.vector);
      p.empty_pool = content.empty_weight;
      p.approx_mask = std::move(masks[m]);
    }
  }
  return out;
}

}  // namespace ocseg
