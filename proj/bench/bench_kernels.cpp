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

// Serial reference kernels against their OpenMP counterparts. Each benchmark
// takes the thread count as its second argument (0 = serial).

#include <omp.h>

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "ocseg/kernels.hpp"
#include "ocseg/rng.hpp"

namespace ocseg {
namespace {

FeatureMap random_features(int h, int w, int c, std::uint64_t seed) {
  Rng rng(seed);
  FeatureMap f(4, h, w, c);
  for (float& v : f.data()) v = static_cast<float>(rng.uniform(-1, 1));
  return f;
}

// Applies the thread count of a run and reports whether it is serial.
bool configure(benchmark::State& state) {
  const auto threads = static_cast<int>(state.range(1));
  if (threads > 0) omp_set_num_threads(threads);
  state.counters["threads"] = threads;
  return threads == 0;
}

void BM_Correlate(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const FeatureMap f = random_features(side, side, 256, 1);
  const std::vector<float> q(f.data().begin(), f.data().begin() + 256);
  ScalarMap out(4, side, side);
  const kernels::CellRect all{0, 0, side, side};
  const bool serial = configure(state);
  for (auto _ : state) {
    if (serial) {
      kernels::serial::correlate(f, q, all, out);
    } else {
      kernels::omp::correlate(f, q, all, out);
    }
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * side * side);
}

void BM_GaussianMax(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(2);
  std::vector<kernels::GaussianCenter> centers(200);
  for (auto& c : centers) c = {rng.uniform(0, side), rng.uniform(0, side)};
  ScalarMap out(4, side, side);
  const bool serial = configure(state);
  for (auto _ : state) {
    if (serial) {
      kernels::serial::gaussian_max(centers, 1.0, 4.0, out);
    } else {
      kernels::omp::gaussian_max(centers, 1.0, 4.0, out);
    }
    benchmark::DoNotOptimize(out.data().data());
  }
}

void BM_NearestCenterVote(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(3);
  RegressionMap reg(4, side, side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      reg.set(y, x, {static_cast<float>(rng.uniform(-4, 4)),
                     static_cast<float>(rng.uniform(-4, 4)), 1.0f, 1.0f});
    }
  }
  std::vector<kernels::CellCoord> centers(100);
  for (auto& c : centers) c = {rng.uniform_index(side), rng.uniform_index(side)};
  std::vector<std::int32_t> owner(static_cast<std::size_t>(side) * side);
  const bool serial = configure(state);
  for (auto _ : state) {
    if (serial) {
      kernels::serial::nearest_center_vote(reg, centers, 0.02 * side, owner);
    } else {
      kernels::omp::nearest_center_vote(reg, centers, 0.02 * side, owner);
    }
    benchmark::DoNotOptimize(owner.data());
  }
}

void BM_WindowPeaks(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(4);
  ScalarMap map(4, side, side);
  for (float& v : map.data()) v = static_cast<float>(rng.uniform(0, 1));
  const bool serial = configure(state);
  for (auto _ : state) {
    auto peaks = serial ? kernels::serial::window_peaks(map, 3, 0.05f)
                        : kernels::omp::window_peaks(map, 3, 0.05f);
    benchmark::DoNotOptimize(peaks.data());
  }
}

void BM_PairHistogram(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(5);
  std::vector<std::int32_t> gt(static_cast<std::size_t>(side) * side),
      pred(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    gt[i] = rng.uniform_index(40);
    pred[i] = rng.uniform_index(40);
  }
  const bool serial = configure(state);
  for (auto _ : state) {
    auto h = serial ? kernels::serial::pair_histogram(gt, pred)
                    : kernels::omp::pair_histogram(gt, pred);
    benchmark::DoNotOptimize(h.data());
  }
}

void thread_args(benchmark::internal::Benchmark* b) {
  for (const int side : {64, 256}) {
    b->Args({side, 0});
    for (int t = 1; t <= omp_get_num_procs(); t *= 2) b->Args({side, t});
  }
}

BENCHMARK(BM_Correlate)->Apply(thread_args);
BENCHMARK(BM_GaussianMax)->Apply(thread_args);
BENCHMARK(BM_NearestCenterVote)->Apply(thread_args);
BENCHMARK(BM_WindowPeaks)->Apply(thread_args);
BENCHMARK(BM_PairHistogram)->Apply(thread_args);

}  // namespace
}  // namespace ocseg

BENCHMARK_MAIN();
