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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "ocseg/error.hpp"
#include "ocseg/ocp_decode.hpp"
#include "ocseg/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ocseg {
namespace {

TEST_CASE("heatmap NMS recovers planted peaks in probability order") {
  ScalarMap m(4, 40, 40);
  const std::vector<std::pair<kernels::CellCoord, float>> planted = {
      {{5, 5}, 0.9f}, {{5, 20}, 0.7f}, {{30, 8}, 0.95f}, {{20, 30}, 0.6f}, {{35, 35}, 0.8f}};
  for (const auto& [c, amp] : planted) {
    for (int y = 0; y < 40; ++y) {
      for (int x = 0; x < 40; ++x) {
        const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
        m.at(y, x) = std::max(m.at(y, x), static_cast<float>(amp * std::exp(-d2 / 2)));
      }
    }
  }
  const auto peaks = heatmap_nms(m, 3, 0.05f);
  REQUIRE(peaks.size() == 5);
  CHECK(peaks[0] == kernels::Peak{30, 8, 0.95f});
  CHECK(peaks[4] == kernels::Peak{20, 30, 0.6f});
  auto scan = oracle::window_scan_peaks(m, 3, 0.05f);
  CHECK(scan.size() == 5);
  CHECK(heatmap_nms(ScalarMap(4, 5, 5, 0.04f), 3, 0.05f).empty());
  CHECK(heatmap_nms(ScalarMap(4, 5, 5, 0.5f), 3, 0.05f).empty());
  CHECK_THROWS_AS(heatmap_nms(m, 0, 0.05f), Error);
}

TEST_CASE("rank_and_select orders by probability, then stride, then position") {
  const std::vector<LevelPeaks> levels = {
      {8, {{1, 1, 0.5f}, {0, 3, 0.9f}}},
      {4, {{2, 2, 0.5f}, {0, 0, 0.2f}}},
      {16, {{0, 0, 0.5f}}},
  };
  const auto all = rank_and_select(levels, 10);
  REQUIRE(all.size() == 5);
  CHECK(all[0] == RankedPeak{8, {0, 3, 0.9f}});
  CHECK(all[1] == RankedPeak{4, {2, 2, 0.5f}});
  CHECK(all[2] == RankedPeak{8, {1, 1, 0.5f}});
  CHECK(all[3] == RankedPeak{16, {0, 0, 0.5f}});
  CHECK(rank_and_select(levels, 2).size() == 2);
  CHECK(rank_and_select(levels, 0).empty());
}

TEST_CASE("positional query reads the box at the peak cell") {
  RegressionMap r(8, 4, 4);
  r.set(1, 2, {0.25f, -0.5f, 3.0f, 2.0f});
  const auto q = positional_query(r, {1, 2}, 64, 32);
  CHECK_FALSE(q.clamped);
  CHECK(q.box.units == Units::kNormalized);
  CHECK(q.box.cx == doctest::Approx((2.75 * 8) / 64));
  CHECK(q.box.cy == doctest::Approx((1.0 * 8) / 32));
  CHECK(q.box.w == doctest::Approx(24.0 / 64));
  CHECK(q.box.h == doctest::Approx(16.0 / 32));

  r.set(0, 0, {-5.0f, 0.0f, -1.0f, 1.0f});
  const auto c = positional_query(r, {0, 0}, 64, 32);
  CHECK(c.clamped);
  CHECK(c.box.w == 0.0);
  CHECK(c.box.cx == 0.0);
  CHECK_THROWS_AS(positional_query(r, {4, 0}, 64, 32), Error);
}

TEST_CASE("instance voting yields disjoint masks equal to the oracle") {
  Rng rng(41);
  RegressionMap r(4, 30, 30);
  for (int y = 0; y < 30; ++y) {
    for (int x = 0; x < 30; ++x) {
      r.set(y, x, {static_cast<float>(rng.uniform(-3, 3)), static_cast<float>(rng.uniform(-3, 3)),
                   1.0f, 1.0f});
    }
  }
  const std::vector<kernels::CellCoord> cells = {{3, 3}, {3, 5}, {20, 20}, {10, 25}};
  const double theta = voting_threshold(30, 0.1);
  CHECK(theta == doctest::Approx(3.0));
  const auto masks = instance_voting(r, cells, theta);
  const auto owner = oracle::nearest_center_owner(r, cells, theta);
  REQUIRE(masks.size() == 4);
  std::vector<int> seen(900, -1);
  for (std::size_t m = 0; m < masks.size(); ++m) {
    const MaskGrid g = rle_decode(masks[m]);
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (!g.data()[j]) continue;
      CHECK(seen[j] == -1);
      seen[j] = static_cast<int>(m);
    }
  }
  for (std::size_t j = 0; j < owner.size(); ++j) CHECK(seen[j] == owner[j]);
}

TEST_CASE("content query pools objectness-weighted features over the mask") {
  Rng rng(42);
  const FeatureMap f = fixture::random_features(rng, 4, 6, 6, 5);
  ScalarMap obj(4, 6, 6, 0.5f);
  obj.at(2, 3) = 0.25f;
  MaskGrid g(6, 6);
  g.set(2, 3, true);
  g.set(4, 1, true);
  const auto q = content_query(f, obj, rle_encode(g));
  CHECK_FALSE(q.empty_weight);
  for (int c = 0; c < 5; ++c) {
    const double want = 0.25 * f.at(2, 3, c) + 0.5 * f.at(4, 1, c);
    CHECK(q.vector[c] == doctest::Approx(want).epsilon(1e-6));
  }
  const auto n = content_query(f, obj, rle_encode(g), true);
  CHECK(n.vector[0] == doctest::Approx(q.vector[0] / 0.75).epsilon(1e-6));
  const auto e = content_query(f, ScalarMap(4, 6, 6), rle_encode(g));
  CHECK(e.empty_weight);
  CHECK(std::all_of(e.vector.begin(), e.vector.end(), [](float v) { return v == 0.0f; }));
  CHECK_THROWS_AS(content_query(f, ScalarMap(4, 5, 6), rle_encode(g)), Error);
}

TEST_CASE("decode_all recovers a planted scene") {
  for (int k = 1; k <= 6; ++k) {
    const auto scene = fixture::make_planted_scene(k, 100 + k, 512, 4);
    const QuerySet q = decode_all(scene.levels, {}, scene.height, scene.width);
    REQUIRE(q.things.size() == static_cast<std::size_t>(k));
    std::set<std::tuple<int, int, int>> want, got;
    for (const auto& o : scene.objects) want.insert({o.stride, o.cell.y, o.cell.x});
    for (const auto& p : q.things) {
      got.insert({p.stride, p.cell.y, p.cell.x});
      CHECK(p.probability == 1.0f);
      CHECK(p.content.size() == 4);
      CHECK_FALSE(p.empty_pool);
    }
    CHECK(got == want);
  }
}

TEST_CASE("decode_all validates the level set") {
  auto scene = fixture::make_planted_scene(2, 7, 256, 4);
  auto missing = scene.levels;
  missing.pop_back();
  CHECK_THROWS_AS(decode_all(missing, {}, 256, 256), Error);
  auto bad = scene.levels;
  bad[1].objectness = ScalarMap(8, 3, 3);
  try {
    decode_all(bad, {}, 256, 256);
    FAIL("expected a shape error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kShapeMismatch);
  }
  OcpDecodeConfig few;
  few.n_things = 1;
  CHECK(decode_all(scene.levels, {{1.0f}}, 256, 256, few).things.size() == 1);
  CHECK(decode_all(scene.levels, {{1.0f}}, 256, 256, few).stuff.size() == 1);
}

}  // namespace
}  // namespace ocseg
