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

#include "doctest.h"
#include "ocseg/error.hpp"
#include "ocseg/mask_decode.hpp"
#include "ocseg/rng.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace ocseg {
namespace {

TEST_CASE("mask projection applies weights and bias and round-trips") {
  const MaskProjection p(2, 3, {1, 2, 0, -1, 0.5f, 0.5f}, {0.25f, 0, -1});
  const std::vector<float> q = {2.0f, 4.0f};
  const auto out = p.apply(q);
  CHECK(out == std::vector<float>{10.25f, -4.0f, 2.0f});
  const auto back = MaskProjection::from_tensor(p.to_tensor());
  CHECK(back.apply(q) == out);
  CHECK(MaskProjection::identity(2).apply(q) == q);
  CHECK_THROWS_AS(p.apply(std::vector<float>{1.0f}), Error);
  CHECK_THROWS_AS(MaskProjection(2, 2, {1, 2, 3}, {0, 0}), Error);
}

TEST_CASE("box_cells selects cells whose centers lie in the box") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const double x0 = rng.uniform(-10, 70), y0 = rng.uniform(-10, 70);
    const Box b = from_corners({x0, y0, x0 + rng.uniform(0, 30), y0 + rng.uniform(0, 30)},
                               Units::kPixels);
    const auto r = box_cells(b, 4, 16, 16);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        const bool in = !r.empty() && y >= r.y0 && y < r.y1 && x >= r.x0 && x < r.x1;
        CHECK(in == oracle::cell_center_inside(b, 4, y, x));
      }
    }
  }
  // Cell centers sit at 2, 6, 10, ... so this box holds exactly one column.
  const auto r = box_cells(from_corners({2.0, 0.0, 2.0, 64.0}, Units::kPixels), 4, 16, 16);
  CHECK(r.x0 == 0);
  CHECK(r.x1 == 1);
}

TEST_CASE("thing masks vanish outside the dilated box and match correlation inside") {
  Rng rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const FeatureMap f = fixture::random_features(rng, 4, 16, 16, 6);
    std::vector<float> q(6);
    for (float& v : q) v = static_cast<float>(rng.uniform(-2, 2));
    const double x0 = rng.uniform(0, 50), y0 = rng.uniform(0, 50);
    const Box px = from_corners({x0, y0, x0 + rng.uniform(1, 14), y0 + rng.uniform(1, 14)},
                                Units::kPixels);
    const auto m = thing_mask(f, q, to_normalized(px, 64, 64), MaskProjection::identity(6), 64, 64);
    const Box d = dilate(px, 64, 64);
    const ScalarMap full = oracle::global_correlation(f, q);
    for (int y = 0; y < 16; ++y) {
      for (int x = 0; x < 16; ++x) {
        if (oracle::cell_center_inside(d, 4, y, x)) {
          CHECK(m.probs.at(y, x) == doctest::Approx(full.at(y, x)).epsilon(1e-6));
        } else {
          CHECK(m.probs.at(y, x) <= 1e-5f);
        }
      }
    }
  }
}

TEST_CASE("a box between cell centers gives an empty mask") {
  Rng rng(10);
  const FeatureMap f = fixture::random_features(rng, 4, 8, 8, 3);
  DilationConfig none;
  none.fraction = 0.0;
  const Box px = from_corners({2.5, 2.5, 5.5, 5.5}, Units::kPixels);
  const auto m = thing_mask(f, std::vector<float>{1, 1, 1}, to_normalized(px, 32, 32),
                            MaskProjection::identity(3), 32, 32, none);
  CHECK(m.empty_box);
  CHECK(binarize(m.probs).empty());
}

TEST_CASE("stuff masks are the unrestricted correlation") {
  Rng rng(11);
  const FeatureMap f = fixture::random_features(rng, 4, 7, 9, 4);
  const std::vector<float> q = {0.5f, -1.0f, 2.0f, 0.0f};
  const ScalarMap m = stuff_mask(f, q, MaskProjection::identity(4));
  const ScalarMap o = oracle::global_correlation(f, q);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 9; ++x) CHECK(m.at(y, x) == doctest::Approx(o.at(y, x)).epsilon(1e-6));
  }
  CHECK_THROWS_AS(stuff_mask(f, q, MaskProjection::identity(3)), Error);
}

TEST_CASE("binarize thresholds strictly and upsamples") {
  ScalarMap p(4, 2, 2, std::vector<float>{0.5f, 0.6f, 0.0f, 1.0f});
  const MaskGrid g = rle_decode(binarize(p));
  CHECK_FALSE(g.at(0, 0));
  CHECK(g.at(0, 1));
  CHECK(g.at(1, 1));

  const MaskGrid near = rle_decode(binarize(p, 0.5f, TargetSize{8, 8}, Upsample::kNearest));
  CHECK(near.height() == 8);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) CHECK(near.at(y, x) == g.at(y / 4, x / 4));
  }

  // Bilinear agrees with the grid at cell centers and is monotone between
  // them, so a 0 -> 1 column pair splits near the midpoint.
  ScalarMap step(4, 1, 2, std::vector<float>{0.0f, 1.0f});
  const MaskGrid bl = rle_decode(binarize(step, 0.5f, TargetSize{4, 8}));
  for (int x = 0; x < 8; ++x) CHECK(bl.at(0, x) == (x >= 4));
  for (int y = 1; y < 4; ++y) {
    for (int x = 0; x < 8; ++x) CHECK(bl.at(y, x) == bl.at(0, x));
  }
}

TEST_CASE("predict_thing and predict_stuff fill the prediction") {
  Rng rng(12);
  const FeatureMap f = fixture::random_features(rng, 4, 8, 8, 2);
  const Box px = from_corners({4.0, 4.0, 20.0, 12.0}, Units::kPixels);
  const auto t = predict_thing(f, std::vector<float>{1, 0}, px, {0.1f, 0.8f},
                               MaskProjection::identity(2), 32, 32);
  CHECK(t.is_thing);
  CHECK(t.class_id() == 1);
  CHECK(t.box.units == Units::kNormalized);
  CHECK(t.box.cx == doctest::Approx(12.0 / 32));
  const auto s = predict_stuff(f, std::vector<float>{1, 0}, {0.9f}, MaskProjection::identity(2));
  CHECK_FALSE(s.is_thing);
  CHECK(s.mask.height() == 8);
}

}  // namespace
}  // namespace ocseg
