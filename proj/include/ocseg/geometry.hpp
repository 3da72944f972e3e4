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

// Axis-aligned box arithmetic: IoU, generalized IoU, unit conversions and the
// box dilation used to constrain thing masks.

namespace ocseg {

enum class Units { kPixels, kNormalized };

// Center/size box. Normalized boxes are relative to the image extent.
struct Box {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;
  Units units = Units::kPixels;

  bool operator==(const Box&) const = default;
};

struct Corners {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

Corners to_corners(const Box& b);
Box from_corners(const Corners& c, Units units);

// Throws kInvalidArgument when w or h is negative or a normalized center
// leaves [0, 1].
void validate(const Box& b);

Box to_normalized(const Box& b, double image_w, double image_h);
Box to_pixels(const Box& b, double image_w, double image_h);

double area(const Box& b);
double intersection_area(const Box& a, const Box& b);

// Both throw kUnitsMismatch when the boxes carry different units. A zero
// union yields iou == giou == 0.
double iou(const Box& a, const Box& b);
double giou(const Box& a, const Box& b);

struct DilationMargins {
  double eps_w = 0.0;
  double eps_h = 0.0;
};

// eps = cap_mode(fraction * extent, cap_px). kMin is the documented recipe;
// kMax is kept as an alternative reading of the cap.
enum class DilationCap { kMin, kMax };

struct DilationConfig {
  double fraction = 0.1;
  double cap_px = 2.0;
  DilationCap cap = DilationCap::kMin;
};

DilationMargins dilation_margins(const Box& b, const DilationConfig& config = {});

// Grows a pixel box by its margins on every side, then clips it to the image.
Box dilate(const Box& b, double image_w, double image_h,
           const DilationConfig& config = {});

}  // namespace ocseg
