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

#include <map>
#include <unordered_map>
#include <utility>

#include "kernel_detail.hpp"
#include "ocseg/error.hpp"
#include "ocseg/kernels.hpp"

namespace ocseg::kernels::omp {

void correlate(const FeatureMap& features, std::span<const float> query,
               const CellRect& rect, ScalarMap& out) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int y = rect.y0; y < rect.y1; ++y) {
    for (int x = rect.x0; x < rect.x1; ++x) {
      out.at(y, x) =
          static_cast<float>(sigmoid(detail::dot(features.cell(y, x), query)));
    }
  }
}

void gaussian_max(std::span<const GaussianCenter> centers, double sigma2,
                  double radius, ScalarMap& out) {
  const int height = out.height();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (const GaussianCenter& c : centers) {
      const auto rows = detail::window_1d(c.cy, radius, height);
      if (y < rows.lo || y > rows.hi) continue;
      const auto cols = detail::window_1d(c.cx, radius, out.width());
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
  const int height = reg.height();
  const int width = reg.width();
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      owner[static_cast<std::size_t>(y) * width + x] =
          detail::vote(reg.at(y, x), y, x, centers, theta);
    }
  }
}

std::vector<double> weighted_pool(const FeatureMap& features,
                                  std::span<const float> weights) {
  const int channels = features.channels();
  const auto cells = static_cast<std::int64_t>(features.cell_count());
  const auto data = features.data();
  std::vector<double> acc(static_cast<std::size_t>(channels), 0.0);
  // One channel per iteration keeps each sum in serial pixel order.
#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    double sum = 0.0;
    for (std::int64_t j = 0; j < cells; ++j) {
      const float w = weights[j];
      if (w == 0.0f) continue;
      sum += static_cast<double>(w) * static_cast<double>(data[j * channels + c]);
    }
    acc[c] = sum;
  }
  return acc;
}

std::vector<Peak> window_peaks(const ScalarMap& map, int window, float floor) {
  const int half = window / 2;
  const int height = map.height();
  std::vector<std::vector<Peak>> rows(static_cast<std::size_t>(height));
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < map.width(); ++x) {
      if (map.at(y, x) > floor && detail::is_strict_peak(map, y, x, half)) {
        rows[y].push_back({y, x, map.at(y, x)});
      }
    }
  }
  std::vector<Peak> peaks;
  for (auto& row : rows) peaks.insert(peaks.end(), row.begin(), row.end());
  return peaks;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<std::int32_t, std::int32_t>& p) const {
    return std::hash<std::uint64_t>{}(
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.first)) << 32) |
        static_cast<std::uint32_t>(p.second));
  }
};

}  // namespace

std::vector<PairCount> pair_histogram(std::span<const std::int32_t> gt,
                                      std::span<const std::int32_t> pred) {
  if (gt.size() != pred.size()) {
    throw Error(ErrorCode::kShapeMismatch, "label maps differ in size");
  }
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> merged;
  const auto n = static_cast<std::int64_t>(gt.size());
#pragma omp parallel
  {
    std::unordered_map<std::pair<std::int32_t, std::int32_t>, std::int64_t,
                       PairHash>
        local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < n; ++i) ++local[{gt[i], pred[i]}];
#pragma omp critical(ocseg_pair_histogram)
    for (const auto& [key, count] : local) merged[key] += count;
  }
  std::vector<PairCount> out;
  out.reserve(merged.size());
  for (const auto& [key, count] : merged) out.push_back({key.first, key.second, count});
  return out;
}

}  // namespace ocseg::kernels::omp
