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

// Data-parallel inner loops. Every kernel exists twice with the same
// signature: `serial` is the plain reference kept for testing and
// benchmarking, `omp` is the OpenMP version the pipeline calls. Both produce
// bit-identical results for any thread count; reductions over floats are
// split by output element, never by input range.

#include <cstdint>
#include <span>
#include <vector>

#include "ocseg/rasters.hpp"

namespace ocseg::kernels {

// Half-open cell rectangle [y0, y1) x [x0, x1).
struct CellRect {
  int y0 = 0;
  int x0 = 0;
  int y1 = 0;
  int x1 = 0;

  bool empty() const { return y1 <= y0 || x1 <= x0; }
};

struct CellCoord {
  int y = 0;
  int x = 0;

  bool operator==(const CellCoord&) const = default;
};

struct Peak {
  int y = 0;
  int x = 0;
  float prob = 0.0f;

  bool operator==(const Peak&) const = default;
};

// Continuous position in cell units (cell (y, x) has its center at
// (x + 0.5, y + 0.5)).
struct GaussianCenter {
  double cx = 0.0;
  double cy = 0.0;
};

struct PairCount {
  std::int32_t gt = 0;
  std::int32_t pred = 0;
  std::int64_t count = 0;

  bool operator==(const PairCount&) const = default;
};

double sigmoid(double v);

namespace serial {

// out(y, x) = sigmoid(features(y, x) . query) inside rect. Cells outside the
// rect are left untouched.
void correlate(const FeatureMap& features, std::span<const float> query,
               const CellRect& rect, ScalarMap& out);

// out = max(out, exp(-d^2 / (2 sigma2))) wherever d <= radius.
void gaussian_max(std::span<const GaussianCenter> centers, double sigma2,
                  double radius, ScalarMap& out);

// owner[cell] = index of the center nearest to the cell's regressed position
// when that distance is < theta, else -1. The lowest index wins ties.
void nearest_center_vote(const RegressionMap& reg,
                         std::span<const CellCoord> centers, double theta,
                         std::span<std::int32_t> owner);

// sum_j weights[j] * features(j), one double per channel.
std::vector<double> weighted_pool(const FeatureMap& features,
                                  std::span<const float> weights);

// Strict window maxima above floor, in row-major order.
std::vector<Peak> window_peaks(const ScalarMap& map, int window, float floor);

// Co-occurrence counts of (gt id, pred id), sorted by (gt, pred).
std::vector<PairCount> pair_histogram(std::span<const std::int32_t> gt,
                                      std::span<const std::int32_t> pred);

}  // namespace serial

namespace omp {

void correlate(const FeatureMap& features, std::span<const float> query,
               const CellRect& rect, ScalarMap& out);
void gaussian_max(std::span<const GaussianCenter> centers, double sigma2,
                  double radius, ScalarMap& out);
void nearest_center_vote(const RegressionMap& reg,
                         std::span<const CellCoord> centers, double theta,
                         std::span<std::int32_t> owner);
std::vector<double> weighted_pool(const FeatureMap& features,
                                  std::span<const float> weights);
std::vector<Peak> window_peaks(const ScalarMap& map, int window, float floor);
std::vector<PairCount> pair_histogram(std::span<const std::int32_t> gt,
                                      std::span<const std::int32_t> pred);

}  // namespace omp

}  // namespace ocseg::kernels
