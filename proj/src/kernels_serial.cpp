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

#include <cmath>
#include <map>
#include <utility>

#include "kernel_detail.hpp"
#include "ocseg/error.hpp"
#include "ocseg/kernels.hpp"

namespace ocseg::kernels {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

namespace serial {

void correlate(const FeatureMap& features, std::span<const float> query,
               const CellRect& rect, ScalarMap& out) {
  for (int y = rect.y0; y < rect.y1; ++y) {
    for (int x = rect.x0; x < rect.x1; ++x) {
      out.at(y, x) =
          static_cast<float>(sigmoid(detail::dot(features.cell(y, x), query)));
    }
  }
}

void gaussian_max(std::span<const GaussianCenter> centers, double sigma2,
                  double radius, ScalarMap& out) {
  for (const GaussianCenter& c : centers) {
    const auto rows = detail::window_1d(c.cy, radius, out.height());
    const auto cols = detail::window_1d(c.cx, radius, out.width());
    for (int y = rows.lo; y <= rows.hi; ++y) {
      for (int x = cols.lo; x <= cols.hi; ++x) {
        const float g = detail::gaussian(x + 0.5 - c.cx, y + 0.5 - c.cy, sigma2,
                                         radius);
        out.at(y, x) = std::max(out.at(y, x), g);
      }
    }
  }
}

void nearest_center_vote(const RegressionMap& reg,
                         std::span<const CellCoord> centers, double theta,
                         std::span<std::int32_t> owner) {
  for (int y = 0; y < reg.height(); ++y) {
    for (int x = 0; x < reg.width(); ++x) {
      owner[static_cast<std::size_t>(y) * reg.width() + x] =
          detail::vote(reg.at(y, x), y, x, centers, theta);
    }
  }
}

std::vector<double> weighted_pool(const FeatureMap& features,
                                  std::span<const float> weights) {
  std::vector<double> acc(static_cast<std::size_t>(features.channels()), 0.0);
  for (int y = 0; y < features.height(); ++y) {
    for (int x = 0; x < features.width(); ++x) {
      const float w = weights[static_cast<std::size_t>(y) * features.width() + x];
      if (w == 0.0f) continue;
      const auto cell = features.cell(y, x);
      for (std::size_t c = 0; c < acc.size(); ++c) {
        acc[c] += static_cast<double>(w) * static_cast<double>(cell[c]);
      }
    }
  }
  return acc;
}

std::vector<Peak> window_peaks(const ScalarMap& map, int window, float floor) {
  std::vector<Peak> peaks;
  const int half = window / 2;
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.at(y, x) > floor && detail::is_strict_peak(map, y, x, half)) {
        peaks.push_back({y, x, map.at(y, x)});
      }
    }
  }
  return peaks;
}

std::vector<PairCount> pair_histogram(std::span<const std::int32_t> gt,
                                      std::span<const std::int32_t> pred) {
  if (gt.size() != pred.size()) {
    throw Error(ErrorCode::kShapeMismatch, "label maps differ in size");
  }
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> counts;
  for (std::size_t i = 0; i < gt.size(); ++i) ++counts[{gt[i], pred[i]}];
  std::vector<PairCount> out;
  out.reserve(counts.size());
  for (const auto& [key, n] : counts) out.push_back({key.first, key.second, n});
  return out;
}

}  // namespace serial
}  // namespace ocseg::kernels
