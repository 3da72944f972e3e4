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

#include "ocseg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

constexpr double kMinUnion = 1e-9;

void require_same_units(const Box& a, const Box& b) {
  if (a.units != b.units) {
    throw Error(ErrorCode::kUnitsMismatch, "boxes use different units");
  }
}

}  // namespace

Corners to_corners(const Box& b) {
  return {b.cx - 0.5 * b.w, b.cy - 0.5 * b.h, b.cx + 0.5 * b.w,
          b.cy + 0.5 * b.h};
}

Box from_corners(const Corners& c, Units units) {
  return {0.5 * (c.x0 + c.x1), 0.5 * (c.y0 + c.y1), c.x1 - c.x0, c.y1 - c.y0,
          units};
}

void validate(const Box& b) {
  if (!(b.w >= 0.0) || !(b.h >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "box extent must be nonnegative, got w=" + std::to_string(b.w) +
                    " h=" + std::to_string(b.h));
  }
  if (b.units == Units::kNormalized &&
      (b.cx < 0.0 || b.cx > 1.0 || b.cy < 0.0 || b.cy > 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "normalized box center outside [0, 1]");
  }
}

Box to_normalized(const Box& b, double image_w, double image_h) {
  if (b.units == Units::kNormalized) return b;
  return {b.cx / image_w, b.cy / image_h, b.w / image_w, b.h / image_h,
          Units::kNormalized};
}

Box to_pixels(const Box& b, double image_w, double image_h) {
  if (b.units == Units::kPixels) return b;
  return {b.cx * image_w, b.cy * image_h, b.w * image_w, b.h * image_h,
          Units::kPixels};
}

double area(const Box& b) { return std::max(b.w, 0.0) * std::max(b.h, 0.0); }

double intersection_area(const Box& a, const Box& b) {
  require_same_units(a, b);
  const Corners ca = to_corners(a);
  const Corners cb = to_corners(b);
  const double iw = std::min(ca.x1, cb.x1) - std::max(ca.x0, cb.x0);
  const double ih = std::min(ca.y1, cb.y1) - std::max(ca.y0, cb.y0);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

double iou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double uni = area(a) + area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double giou(const Box& a, const Box& b) {
  const double inter = intersection_area(a, b);
  const double raw_union = area(a) + area(b) - inter;
  const double iou_value = raw_union > 0.0 ? inter / raw_union : 0.0;
  const double uni = std::max(raw_union, kMinUnion);
  const Corners ca = to_corners(a);
  const Corners cb = to_corners(b);
  const double hull_w = std::max(ca.x1, cb.x1) - std::min(ca.x0, cb.x0);
  const double hull_h = std::max(ca.y1, cb.y1) - std::min(ca.y0, cb.y0);
  const double hull = std::max(hull_w * hull_h, uni);
  return iou_value - (hull - uni) / hull;
}

DilationMargins dilation_margins(const Box& b, const DilationConfig& config) {
  const auto pick = [&](double extent) {
    const double scaled = config.fraction * std::max(extent, 0.0);
    return config.cap == DilationCap::kMin ? std::min(scaled, config.cap_px)
                                           : std::max(scaled, config.cap_px);
  };
  return {pick(b.w), pick(b.h)};
}

Box dilate(const Box& b, double image_w, double image_h,
           const DilationConfig& config) {
  if (b.units != Units::kPixels) {
    throw Error(ErrorCode::kUnitsMismatch, "dilate expects a pixel box");
  }
  const DilationMargins m = dilation_margins(b, config);
  Corners c = to_corners(b);
  c.x0 = std::clamp(c.x0 - m.eps_w, 0.0, image_w);
  c.x1 = std::clamp(c.x1 + m.eps_w, 0.0, image_w);
  c.y0 = std::clamp(c.y0 - m.eps_h, 0.0, image_h);
  c.y1 = std::clamp(c.y1 + m.eps_h, 0.0, image_h);
  return from_corners(c, Units::kPixels);
}

}  // namespace ocseg
