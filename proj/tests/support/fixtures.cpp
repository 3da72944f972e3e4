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

#include "support/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace ocseg::fixture {

BinaryMask rect_mask(int height, int width, int x0, int y0, int x1, int y1) {
  MaskGrid g(height, width);
  for (int y = std::max(y0, 0); y < std::min(y1, height); ++y) {
    for (int x = std::max(x0, 0); x < std::min(x1, width); ++x) g.set(y, x, true);
  }
  return rle_encode(g);
}

GtInstance rect_instance(int height, int width, int x0, int y0, int x1, int y1,
                         int class_id, bool is_thing) {
  return GtInstance::from_mask(class_id, is_thing,
                               rect_mask(height, width, x0, y0, x1, y1));
}

FeatureMap random_features(Rng& rng, int stride, int height, int width, int channels,
                           float lo, float hi) {
  FeatureMap f(stride, height, width, channels);
  for (float& v : f.data()) v = static_cast<float>(rng.uniform(lo, hi));
  return f;
}

ScalarMap random_probs(Rng& rng, int stride, int height, int width) {
  ScalarMap m(stride, height, width);
  for (float& v : m.data()) v = static_cast<float>(rng.uniform(0.0, 1.0));
  return m;
}

namespace {

// Diagonals drawn per level, inside that level's supervision range.
struct DiagonalRange {
  int stride;
  double lo, hi;
};
constexpr DiagonalRange kDiagonals[] = {
    {4, 8, 60}, {8, 36, 120}, {16, 70, 250}, {32, 135, 500}, {64, 260, 700}};

}  // namespace

PlantedScene make_planted_scene(int k, std::uint64_t seed, int image_size, int channels) {
  Rng rng(seed);
  PlantedScene scene;
  scene.height = scene.width = image_size;
  std::map<int, OcpLevelHeads*> by_stride;
  for (const auto& d : kDiagonals) {
    const int n = level_extent(image_size, d.stride);
    OcpLevelHeads l;
    l.stride = d.stride;
    l.center = ScalarMap(d.stride, n, n);
    l.regression = RegressionMap(d.stride, n, n);
    l.objectness = ScalarMap(d.stride, n, n);
    l.features = random_features(rng, d.stride, n, n, channels);
    // Background regression points somewhere nearby, so cells away from
    // the objects still vote when they land close to a proposal.
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        l.regression.set(y, x,
                         {static_cast<float>(rng.uniform(-3, 3)),
                          static_cast<float>(rng.uniform(-3, 3)),
                          static_cast<float>(rng.uniform(0, 4)),
                          static_cast<float>(rng.uniform(0, 4))});
      }
    }
    scene.levels.push_back(std::move(l));
  }
  for (auto& l : scene.levels) by_stride[l.stride] = &l;

  while (static_cast<int>(scene.objects.size()) < k) {
    const DiagonalRange& d = kDiagonals[rng.uniform_index(5)];
    const int n = level_extent(image_size, d.stride);
    const double diag = rng.uniform(d.lo, d.hi);
    const double angle = rng.uniform(0.25, 1.3);
    const int w = std::max(2, static_cast<int>(std::lround(diag * std::cos(angle))));
    const int h = std::max(2, static_cast<int>(std::lround(diag * std::sin(angle))));
    const double real = std::hypot(w, h);
    if (real < d.lo || real > d.hi) continue;
    const PlantedObject obj{d.stride,
                            {rng.uniform_index(n), rng.uniform_index(n)},
                            {0, 0, static_cast<double>(w), static_cast<double>(h),
                             Units::kPixels}};
    bool clash = false;
    for (const auto& other : scene.objects) {
      if (other.stride != obj.stride) continue;
      clash |= std::max(std::abs(other.cell.x - obj.cell.x),
                        std::abs(other.cell.y - obj.cell.y)) < 3;
    }
    if (clash) continue;
    PlantedObject placed = obj;
    placed.box.cx = (obj.cell.x + 0.5) * obj.stride;
    placed.box.cy = (obj.cell.y + 0.5) * obj.stride;
    scene.objects.push_back(placed);
  }

  // Object regions first, peak cells last so a peak always holds its own box.
  for (const auto& o : scene.objects) {
    OcpLevelHeads& l = *by_stride.at(o.stride);
    const int n = l.center.width();
    const double s = o.stride;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const double px = (x + 0.5) * s, py = (y + 0.5) * s;
        if (std::abs(px - o.box.cx) > o.box.w / 2 || std::abs(py - o.box.cy) > o.box.h / 2) {
          continue;
        }
        l.regression.set(y, x,
                         {static_cast<float>(o.cell.x - x), static_cast<float>(o.cell.y - y),
                          static_cast<float>(o.box.w / s), static_cast<float>(o.box.h / s)});
        l.objectness.at(y, x) = 1.0f;
      }
      for (int x = 0; x < n; ++x) {
        const double d2 = (x - o.cell.x) * (x - o.cell.x) + (y - o.cell.y) * (y - o.cell.y);
        if (d2 > 16.0) continue;
        l.center.at(y, x) = std::max(l.center.at(y, x), static_cast<float>(std::exp(-d2 / 2)));
      }
    }
  }
  for (const auto& o : scene.objects) {
    OcpLevelHeads& l = *by_stride.at(o.stride);
    l.regression.set(o.cell.y, o.cell.x,
                     {0.0f, 0.0f, static_cast<float>(o.box.w / o.stride),
                      static_cast<float>(o.box.h / o.stride)});
  }
  return scene;
}

namespace {

InstancePrediction rect_prediction(int height, int width, const BinaryMask& mask_region,
                                   int x0, int y0, int x1, int y1,
                                   std::vector<float> probs) {
  InstancePrediction p;
  p.class_probs = std::move(probs);
  p.box = to_normalized(from_corners({double(x0), double(y0), double(x1), double(y1)},
                                     Units::kPixels),
                        width, height);
  p.mask = ScalarMap(1, height, width, 0.1f);
  const MaskGrid g = rle_decode(mask_region);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.data()[k]) p.mask.data()[k] = 0.9f;
  }
  p.is_thing = true;
  return p;
}

}  // namespace

DriftScene make_drift_scene() {
  DriftScene s;
  const int H = s.height, W = s.width;
  s.gts.push_back(rect_instance(H, W, 10, 10, 50, 50, 0));
  s.gts.push_back(rect_instance(H, W, 60, 60, 90, 90, 1));
  const BinaryMask& a = s.gts[0].mask;
  const BinaryMask& b = s.gts[1].mask;
  s.preds.push_back(rect_prediction(H, W, a, 10, 10, 50, 46, {0.9f, 0.05f}));
  s.preds.push_back(rect_prediction(H, W, a, 10, 14, 50, 50, {0.1f, 0.05f}));
  s.preds.push_back(rect_prediction(H, W, b, 60, 60, 90, 63, {0.05f, 0.9f}));
  return s;
}

MatchScene random_match_scene(Rng& rng, int image) {
  MatchScene s;
  const int n_gt = 1 + rng.uniform_index(5);
  struct Rect {
    int x0, y0, x1, y1;
  };
  std::vector<Rect> gt_rects;
  for (int i = 0; i < n_gt; ++i) {
    const int w = 6 + rng.uniform_index(image / 2), h = 6 + rng.uniform_index(image / 2);
    const int x0 = rng.uniform_index(image - w), y0 = rng.uniform_index(image - h);
    gt_rects.push_back({x0, y0, x0 + w, y0 + h});
    s.gts.push_back(rect_instance(image, image, x0, y0, x0 + w, y0 + h, rng.uniform_index(3)));
  }
  const int n_pred = 1 + rng.uniform_index(8);
  const int grid = (image + 3) / 4;
  for (int i = 0; i < n_pred; ++i) {
    Rect r;
    if (rng.uniform(0, 1) < 0.6) {
      // Near a GT: small jitter gives IoU above 0.8 now and then.
      const Rect& g = gt_rects[rng.uniform_index(n_gt)];
      const int j = 1 + rng.uniform_index(4);
      r = {g.x0 + rng.uniform_index(2 * j + 1) - j, g.y0 + rng.uniform_index(2 * j + 1) - j,
           g.x1 + rng.uniform_index(2 * j + 1) - j, g.y1 + rng.uniform_index(2 * j + 1) - j};
      r.x0 = std::clamp(r.x0, 0, image - 2);
      r.y0 = std::clamp(r.y0, 0, image - 2);
      r.x1 = std::clamp(r.x1, r.x0 + 1, image);
      r.y1 = std::clamp(r.y1, r.y0 + 1, image);
    } else {
      const int w = 2 + rng.uniform_index(image / 2), h = 2 + rng.uniform_index(image / 2);
      const int x0 = rng.uniform_index(image - w), y0 = rng.uniform_index(image - h);
      r = {x0, y0, x0 + w, y0 + h};
    }
    InstancePrediction p;
    p.class_probs = {static_cast<float>(rng.uniform(0, 1)), static_cast<float>(rng.uniform(0, 1)),
                     static_cast<float>(rng.uniform(0, 1))};
    p.box = to_normalized(from_corners({double(r.x0), double(r.y0), double(r.x1), double(r.y1)},
                                       Units::kPixels),
                          image, image);
    p.mask = random_probs(rng, 4, grid, grid);
    p.is_thing = true;
    s.preds.push_back(std::move(p));
  }
  return s;
}

PanopticMap random_panoptic(Rng& rng, int height, int width, int max_segments, int classes,
                            int thing_classes) {
  std::vector<std::int32_t> ids(static_cast<std::size_t>(height) * width, 0);
  std::map<std::int32_t, SegmentInfo> table;
  const int n = 1 + rng.uniform_index(max_segments);
  for (int i = 0; i < n; ++i) {
    const int x0 = rng.uniform_index(width), y0 = rng.uniform_index(height);
    const int x1 = x0 + 1 + rng.uniform_index(width - x0);
    const int y1 = y0 + 1 + rng.uniform_index(height - y0);
    const std::int32_t id = 1 + rng.uniform_index(1000);
    if (table.contains(id)) continue;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) ids[static_cast<std::size_t>(y) * width + x] = id;
    }
    const int cls = rng.uniform_index(classes);
    table[id] = {cls, cls < thing_classes};
  }
  // Drop table entries that were painted over completely.
  std::map<std::int32_t, SegmentInfo> used;
  for (const auto id : ids) {
    if (id != 0) used[id] = table.at(id);
  }
  return PanopticMap(height, width, std::move(ids), std::move(used));
}

PanopticMap perturb_panoptic(Rng& rng, const PanopticMap& gt, int classes,
                             int thing_classes) {
  const int H = gt.height(), W = gt.width();
  std::vector<std::int32_t> ids(static_cast<std::size_t>(H) * W, 0);
  std::map<std::int32_t, SegmentInfo> table;
  std::int32_t next = 2000 + rng.uniform_index(100);
  for (const auto& [id, info] : gt.segments()) {
    if (rng.uniform(0, 1) < 0.15) continue;  // missed
    const int dx = rng.uniform_index(5) - 2, dy = rng.uniform_index(5) - 2;
    const std::int32_t pid = next--;
    for (int y = 0; y < H; ++y) {
      for (int x = 0; x < W; ++x) {
        const int sx = x - dx, sy = y - dy;
        if (sx < 0 || sx >= W || sy < 0 || sy >= H) continue;
        if (gt.at(sy, sx) != id) continue;
        // Grow or erode a little at random.
        if (rng.uniform(0, 1) < 0.05) continue;
        ids[static_cast<std::size_t>(y) * W + x] = pid;
      }
    }
    int cls = info.class_id;
    if (rng.uniform(0, 1) < 0.2) cls = rng.uniform_index(classes);
    table[pid] = {cls, cls < thing_classes};
  }
  if (rng.uniform(0, 1) < 0.5) {
    const int x0 = rng.uniform_index(W), y0 = rng.uniform_index(H);
    const int x1 = std::min(W, x0 + 1 + rng.uniform_index(W / 2 + 1));
    const int y1 = std::min(H, y0 + 1 + rng.uniform_index(H / 2 + 1));
    const std::int32_t pid = next--;
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) ids[static_cast<std::size_t>(y) * W + x] = pid;
    }
    const int cls = rng.uniform_index(classes);
    table[pid] = {cls, cls < thing_classes};
  }
  std::map<std::int32_t, SegmentInfo> used;
  for (const auto id : ids) {
    if (id != 0) used[id] = table.at(id);
  }
  return PanopticMap(H, W, std::move(ids), std::move(used));
}

}  // namespace ocseg::fixture
