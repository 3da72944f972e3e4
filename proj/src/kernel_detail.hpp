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

// Per-element arithmetic shared by the serial and OpenMP kernels so both
// produce the same bits.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

#include "ocseg/kernels.hpp"

namespace ocseg::kernels::detail {

inline double dot(std::span<const float> a, std::span<const float> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return acc;
}

inline float gaussian(double dx, double dy, double sigma2, double radius) {
  const double d2 = dx * dx + dy * dy;
  if (d2 > radius * radius) return 0.0f;
  return static_cast<float>(std::exp(-0.5 * d2 / sigma2));
}

inline std::int32_t vote(const RegressionCell& r, int y, int x,
                         std::span<const CellCoord> centers, double theta) {
  const double rx = x + 0.5 + static_cast<double>(r.dx);
  const double ry = y + 0.5 + static_cast<double>(r.dy);
  std::int32_t best = -1;
  double best_d = 0.0;
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double ddx = rx - (centers[k].x + 0.5);
    const double ddy = ry - (centers[k].y + 0.5);
    const double d = std::sqrt(ddx * ddx + ddy * ddy);
    if (best < 0 || d < best_d) {
      best = static_cast<std::int32_t>(k);
      best_d = d;
    }
  }
  return (best >= 0 && best_d < theta) ? best : -1;
}

inline bool is_strict_peak(const ScalarMap& map, int y, int x, int half) {
  const float v = map.at(y, x);
  const int y0 = std::max(0, y - half), y1 = std::min(map.height() - 1, y + half);
  const int x0 = std::max(0, x - half), x1 = std::min(map.width() - 1, x + half);
  for (int yy = y0; yy <= y1; ++yy) {
    for (int xx = x0; xx <= x1; ++xx) {
      if ((yy != y || xx != x) && !(v > map.at(yy, xx))) return false;
    }
  }
  return true;
}

// Inclusive row/col span of cells within `radius` of a center, clipped.
struct Window {
  int lo = 0;
  int hi = -1;
};

inline Window window_1d(double center, double radius, int extent) {
  const int lo = static_cast<int>(std::ceil(center - 0.5 - radius));
  const int hi = static_cast<int>(std::floor(center - 0.5 + radius));
  return {std::max(lo, 0), std::min(hi, extent - 1)};
}

}  // namespace ocseg::kernels::detail
