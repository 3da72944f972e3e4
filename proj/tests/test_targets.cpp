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

#include "doctest.h"
#include "ocseg/error.hpp"
#include "ocseg/rng.hpp"
#include "ocseg/targets.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ocseg {
namespace {

using fixture::rect_instance;

TEST_CASE("level table") {
  const auto levels = level_ranges();
  REQUIRE(levels.size() == 5);
  CHECK(levels[0].stride == 64);
  CHECK(levels[0].d_min == 256.0);
  CHECK(std::isinf(levels[0].d_max));
  CHECK(level_range_for_stride(8).d_min == 32.0);
  CHECK(level_range_for_stride(8).d_max == 128.0);
  CHECK(level_range_for_stride(4).d_max == 64.0);
  CHECK(strides_covering(100.0) == std::vector<int>{16, 8});
  CHECK(strides_covering(10.0) == std::vector<int>{4});
  CHECK(strides_covering(1000.0) == std::vector<int>{64});
  CHECK(strides_covering(256.0) == std::vector<int>{64, 32, 16});
  CHECK_THROWS_AS(level_range_for_stride(2), Error);
  CHECK(level_extent(100, 8) == 13);
  CHECK(level_extent(96, 8) == 12);
}

TEST_CASE("GT instances derive their tight box") {
  const GtInstance g = rect_instance(50, 60, 10, 5, 40, 25, 3);
  CHECK(g.box == Box{25.0, 15.0, 30.0, 20.0, Units::kPixels});
  CHECK(g.diagonal() == doctest::Approx(std::hypot(30.0, 20.0)));
  CHECK(g.area() == 600);
  CHECK_THROWS_AS(GtInstance::from_mask(0, true, BinaryMask(4, 4, {})), Error);
}

TEST_CASE("center targets peak at 1 on the center cell and follow the naive oracle") {
  Rng rng(21);
  for (int t = 0; t < 10; ++t) {
    std::vector<GtInstance> inst;
    const int n = 1 + rng.uniform_index(8);
    for (int i = 0; i < n; ++i) {
      const int w = 4 + rng.uniform_index(120), h = 4 + rng.uniform_index(120);
      const int x0 = rng.uniform_index(256 - w), y0 = rng.uniform_index(200 - h);
      inst.push_back(rect_instance(200, 256, x0, y0, x0 + w, y0 + h, 0, rng.uniform(0, 1) < 0.8));
    }
    for (const auto& level : level_ranges()) {
      const int mh = level_extent(200, level.stride), mw = level_extent(256, level.stride);
      const ScalarMap got = center_targets(inst, level, mh, mw);
      const ScalarMap want =
          oracle::naive_center_map(inst, level.stride, level.d_min, level.d_max, mh, mw);
      for (std::size_t k = 0; k < got.size(); ++k) {
        CHECK(got.data()[k] == doctest::Approx(want.data()[k]).epsilon(1e-6));
      }
      for (const auto& g : inst) {
        const auto c = center_cell_position(g, level.stride, mh, mw);
        const float v = got.at(static_cast<int>(c.cy), static_cast<int>(c.cx));
        if (g.is_thing && level.contains(g.diagonal())) CHECK(v == 1.0f);
      }
    }
  }
}

TEST_CASE("out-of-range and stuff instances leave no center") {
  const std::vector<GtInstance> inst = {rect_instance(64, 64, 0, 0, 60, 60, 0),
                                        rect_instance(64, 64, 0, 0, 10, 10, 1, false)};
  const ScalarMap c = center_targets(inst, level_range_for_stride(4), 16, 16);
  for (const float v : c.data()) CHECK(v == 0.0f);
}

TEST_CASE("regression targets, objectness and ignore regions") {
  // A small thing (diagonal ~14) inside a large thing (diagonal ~85).
  const std::vector<GtInstance> inst = {rect_instance(64, 64, 0, 0, 60, 60, 0),
                                        rect_instance(64, 64, 20, 20, 30, 30, 1)};
  const auto t = regression_objectness_targets(inst, level_range_for_stride(4), 16, 16);
  const MaskGrid ignore = rle_decode(t.ignore);
  // Cell (5, 5) has its center at pixel (22, 22): inside the small thing,
  // which wins the overlap and is in range for stride 4.
  CHECK(t.objectness.at(5, 5) == 1.0f);
  CHECK_FALSE(ignore.at(5, 5));
  const RegressionCell r = t.regression.at(5, 5);
  CHECK(r.dx == doctest::Approx(25.0 / 4 - 5.5));
  CHECK(r.dy == doctest::Approx(25.0 / 4 - 5.5));
  CHECK(r.w == doctest::Approx(2.5));
  CHECK(r.h == doctest::Approx(2.5));
  // Cell (1, 1) lies on the large thing only: out of range, ignored.
  CHECK(t.objectness.at(1, 1) == 0.0f);
  CHECK(ignore.at(1, 1));
  // Cell (15, 15) is background.
  CHECK(t.objectness.at(15, 15) == 0.0f);
  CHECK_FALSE(ignore.at(15, 15));

  const auto coarse = regression_objectness_targets(inst, level_range_for_stride(16), 4, 4);
  // At stride 16 the large thing is in range and owns cell (0, 0).
  CHECK(coarse.objectness.at(0, 0) == 1.0f);
  CHECK(coarse.regression.at(0, 0).w == doctest::Approx(60.0 / 16));
}

TEST_CASE("ocp_targets produces all five levels, finest first") {
  const std::vector<GtInstance> inst = {rect_instance(128, 96, 10, 10, 50, 40, 0)};
  const auto levels = ocp_targets(inst, 128, 96);
  REQUIRE(levels.size() == 5);
  CHECK(levels[0].stride == 4);
  CHECK(levels[4].stride == 64);
  CHECK(levels[0].center.height() == 32);
  CHECK(levels[0].center.width() == 24);
  CHECK(levels[4].center.width() == 2);
  CHECK(levels[2].ignore.height() == levels[2].center.height());
}

}  // namespace
}  // namespace ocseg
