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

#include "ocseg/augment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {

GtScene GtScene::from_panoptic(const PanopticMap& map) {
  GtScene scene{map.height(), map.width(), {}};
  for (const auto& [id, info] : map.segments()) {
    BinaryMask mask = rle_encode(map.segment_mask(id));
    if (mask.empty()) continue;
    scene.instances.push_back(
        GtInstance::from_mask(info.class_id, info.is_thing, std::move(mask)));
  }
  return scene;
}

PanopticMap GtScene::to_panoptic() const {
  std::vector<std::int32_t> ids(static_cast<std::size_t>(height) * width, 0);
  std::map<std::int32_t, SegmentInfo> segments;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto id = static_cast<std::int32_t>(i + 1);
    const GtInstance& inst = instances[i];
    if (inst.mask.height() != height || inst.mask.width() != width) {
      throw Error(ErrorCode::kShapeMismatch, "instance mask does not match the scene");
    }
    for (const Run& r : inst.mask.runs()) {
      std::fill_n(ids.begin() + r.start, r.length, id);
    }
    segments[id] = {inst.class_id, inst.is_thing};
  }
  return PanopticMap(height, width, std::move(ids), std::move(segments));
}

namespace {

struct Pixel {
  int y, x;
};

std::vector<Pixel> mask_pixels(const BinaryMask& mask) {
  std::vector<Pixel> out;
  for (const Run& r : mask.runs()) {
    for (std::int64_t j = r.start; j < r.start + r.length; ++j) {
      out.push_back({static_cast<int>(j / mask.width()),
                     static_cast<int>(j % mask.width())});
    }
  }
  return out;
}

}  // namespace

CopyPasteResult copy_paste(const GtScene& target, std::span<const GtInstance> donors,
                           const BinaryMask& region, int n, Rng& rng,
                           const CopyPasteConfig& config) {
  if (n < 0) throw Error(ErrorCode::kInvalidArgument, "paste count must be >= 0");
  const bool constrained = region.height() != 0 || region.width() != 0;
  if (constrained) {
    if (region.height() != target.height || region.width() != target.width) {
      throw Error(ErrorCode::kShapeMismatch, "paste region does not match the scene");
    }
    if (region.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "paste region is empty");
    }
  }
  CopyPasteResult out{target, {}};
  if (n == 0) return out;
  if (donors.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no donor instances to paste");
  }
  const MaskGrid region_grid = constrained ? rle_decode(region) : MaskGrid();

  for (int k = 0; k < n; ++k) {
    const int d = rng.uniform_index(static_cast<int>(donors.size()));
    const GtInstance& donor = donors[d];
    const auto pixels = mask_pixels(donor.mask);
    const Corners c = to_corners(donor.box);
    const int bx = static_cast<int>(c.x0), by = static_cast<int>(c.y0);
    const int bw = static_cast<int>(c.x1) - bx, bh = static_cast<int>(c.y1) - by;
    if (pixels.empty() || bw > target.width || bh > target.height) {
      out.warnings.push_back("donor " + std::to_string(d) +
                             " does not fit the image; skipped");
      continue;
    }
    double sx = 0.0, sy = 0.0;
    for (const Pixel& p : pixels) {
      sx += p.x - bx;
      sy += p.y - by;
    }
    const double mx = sx / static_cast<double>(pixels.size());
    const double my = sy / static_cast<double>(pixels.size());

    int ox = -1, oy = -1;
    for (int attempt = 0; attempt < config.max_retries; ++attempt) {
      const int tx = rng.uniform_index(target.width - bw + 1);
      const int ty = rng.uniform_index(target.height - bh + 1);
      const int cx = static_cast<int>(std::floor(tx + mx));
      const int cy = static_cast<int>(std::floor(ty + my));
      if (!constrained || region_grid.at(cy, cx)) {
        ox = tx;
        oy = ty;
        break;
      }
    }
    if (ox < 0) {
      out.warnings.push_back("donor " + std::to_string(d) + " found no placement after " +
                             std::to_string(config.max_retries) + " attempts; skipped");
      continue;
    }

    MaskGrid pasted(target.height, target.width);
    for (const Pixel& p : pixels) pasted.set(oy + p.y - by, ox + p.x - bx, true);
    std::vector<GtInstance> kept;
    for (GtInstance& inst : out.scene.instances) {
      MaskGrid g = rle_decode(inst.mask);
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (pasted.data()[j]) g.data()[j] = 0;
      }
      BinaryMask m = rle_encode(g);
      if (m.empty()) continue;
      kept.push_back(GtInstance::from_mask(inst.class_id, inst.is_thing, std::move(m)));
    }
    kept.push_back(
        GtInstance::from_mask(donor.class_id, donor.is_thing, rle_encode(pasted)));
    out.scene.instances = std::move(kept);
  }
  return out;
}

}  // namespace ocseg
