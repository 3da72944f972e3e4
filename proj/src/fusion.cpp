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

#include "ocseg/fusion.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "ocseg/error.hpp"

namespace ocseg {

void validate(const FusionConfig& config) {
  if (!(config.confidence_floor >= 0.0 && config.confidence_floor <= 1.0) ||
      !(config.retention >= 0.0 && config.retention <= 1.0) ||
      !(config.mask_threshold >= 0.0f && config.mask_threshold <= 1.0f) ||
      config.stuff_min_area < 0) {
    throw Error(ErrorCode::kInvalidArgument, "fusion config out of range");
  }
}

PanopticMap fuse(std::span<const InstancePrediction> things,
                 std::span<const InstancePrediction> stuffs, int image_h,
                 int image_w, const FusionConfig& config) {
  validate(config);
  struct Entry {
    const InstancePrediction* pred;
    bool is_thing;
    std::size_t index;
    float confidence;
  };
  std::vector<Entry> order;
  for (std::size_t i = 0; i < things.size(); ++i) {
    order.push_back({&things[i], true, i, things[i].confidence()});
  }
  for (std::size_t i = 0; i < stuffs.size(); ++i) {
    order.push_back({&stuffs[i], false, i, stuffs[i].confidence()});
  }
  std::sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.is_thing != b.is_thing) return a.is_thing;
    return a.index < b.index;
  });

  std::vector<std::int32_t> ids(static_cast<std::size_t>(image_h) * image_w, 0);
  std::map<std::int32_t, SegmentInfo> segments;
  std::int32_t next_id = 1;
  std::vector<std::int64_t> claimed;
  for (const Entry& e : order) {
    if (e.confidence < config.confidence_floor) continue;
    const int cls = e.pred->class_id();
    if (cls < 0) continue;
    const BinaryMask mask =
        binarize(e.pred->mask, config.mask_threshold,
                 TargetSize{image_h, image_w}, config.upsample);
    const std::int64_t total = mask.area();
    if (total == 0) continue;
    claimed.clear();
    for (const Run& r : mask.runs()) {
      for (std::int64_t j = r.start; j < r.start + r.length; ++j) {
        if (ids[j] == 0) claimed.push_back(j);
      }
    }
    const auto surviving = static_cast<std::int64_t>(claimed.size());
    if (surviving == 0) continue;
    if (static_cast<double>(surviving) < config.retention * static_cast<double>(total)) {
      continue;
    }
    if (!e.is_thing && surviving < config.stuff_min_area) continue;
    for (const std::int64_t j : claimed) ids[j] = next_id;
    segments[next_id] = {cls, e.is_thing};
    ++next_id;
  }
  return PanopticMap(image_h, image_w, std::move(ids), std::move(segments));
}

}  // namespace ocseg
