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

#include "ocseg/mask_decode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ocseg/error.hpp"

namespace ocseg {

MaskProjection::MaskProjection(int in_dim, int out_dim, std::vector<float> weight,
                               std::vector<float> bias)
    : in_dim_(in_dim),
      out_dim_(out_dim),
      weight_(std::move(weight)),
      bias_(std::move(bias)) {
  if (in_dim < 0 || out_dim < 0 ||
      weight_.size() != static_cast<std::size_t>(in_dim) * out_dim ||
      bias_.size() != static_cast<std::size_t>(out_dim)) {
    throw Error(ErrorCode::kShapeMismatch, "mask projection shape mismatch");
  }
}

MaskProjection MaskProjection::identity(int dim) {
  std::vector<float> w(static_cast<std::size_t>(dim) * dim, 0.0f);
  for (int i = 0; i < dim; ++i) w[static_cast<std::size_t>(i) * dim + i] = 1.0f;
  return MaskProjection(dim, dim, std::move(w), std::vector<float>(dim, 0.0f));
}

MaskProjection MaskProjection::from_tensor(const FeatureMap& tensor) {
  if (tensor.channels() != 1 || tensor.width() < 1) {
    throw Error(ErrorCode::kShapeMismatch,
                "projection tensor must be (out, in + 1, 1)");
  }
  const int out_dim = tensor.height();
  const int in_dim = tensor.width() - 1;
  std::vector<float> w(static_cast<std::size_t>(out_dim) * in_dim);
  std::vector<float> b(out_dim);
  for (int r = 0; r < out_dim; ++r) {
    for (int c = 0; c < in_dim; ++c) {
      w[static_cast<std::size_t>(r) * in_dim + c] = tensor.at(r, c, 0);
    }
    b[r] = tensor.at(r, in_dim, 0);
  }
  return MaskProjection(in_dim, out_dim, std::move(w), std::move(b));
}

FeatureMap MaskProjection::to_tensor() const {
  FeatureMap t(1, out_dim_, in_dim_ + 1, 1);
  for (int r = 0; r < out_dim_; ++r) {
    for (int c = 0; c < in_dim_; ++c) {
      t.at(r, c, 0) = weight_[static_cast<std::size_t>(r) * in_dim_ + c];
    }
    t.at(r, in_dim_, 0) = bias_[r];
  }
  return t;
}

std::vector<float> MaskProjection::apply(std::span<const float> query) const {
  if (query.size() != static_cast<std::size_t>(in_dim_)) {
    throw Error(ErrorCode::kShapeMismatch,
                "query has " + std::to_string(query.size()) +
                    " channels, projection expects " + std::to_string(in_dim_));
  }
  std::vector<float> out(out_dim_);
  for (int r = 0; r < out_dim_; ++r) {
    double acc = bias_[r];
    const float* row = weight_.data() + static_cast<std::size_t>(r) * in_dim_;
    for (int c = 0; c < in_dim_; ++c) acc += static_cast<double>(row[c]) * query[c];
    out[r] = static_cast<float>(acc);
  }
  return out;
}

kernels::CellRect box_cells(const Box& pixel_box, int stride, int grid_h,
                            int grid_w) {
  const Corners c = to_corners(pixel_box);
  const auto span_of = [stride](double lo, double hi, int extent) {
    int first = extent, last = -1;
    for (int i = 0; i < extent; ++i) {
      const double center = (i + 0.5) * stride;
      if (center < lo || center > hi) continue;
      first = std::min(first, i);
      last = i;
    }
    return std::pair{first, last + 1};
  };
  const auto [x0, x1] = span_of(c.x0, c.x1, grid_w);
  const auto [y0, y1] = span_of(c.y0, c.y1, grid_h);
  if (x1 <= x0 || y1 <= y0) return {};
  return {y0, x0, y1, x1};
}

namespace {

void require_features_match(const FeatureMap& features,
                            const MaskProjection& projection) {
  if (features.channels() != projection.out_dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "feature channels do not match the projection output");
  }
}

}  // namespace

ThingMask thing_mask(const FeatureMap& features_p4, std::span<const float> query,
                     const Box& query_box, const MaskProjection& projection,
                     int image_w, int image_h, const DilationConfig& dilation) {
  require_features_match(features_p4, projection);
  const Box dilated = dilate(to_pixels(query_box, image_w, image_h), image_w,
                             image_h, dilation);
  const auto rect = box_cells(dilated, features_p4.stride(), features_p4.height(),
                              features_p4.width());
  ThingMask out{ScalarMap(features_p4.stride(), features_p4.height(),
                          features_p4.width()),
                rect.empty()};
  if (out.empty_box) return out;
  const auto projected = projection.apply(query);
  kernels::omp::correlate(features_p4, projected, rect, out.probs);
  return out;
}

ScalarMap stuff_mask(const FeatureMap& features_p4, std::span<const float> query,
                     const MaskProjection& projection) {
  require_features_match(features_p4, projection);
  ScalarMap out(features_p4.stride(), features_p4.height(), features_p4.width());
  const auto projected = projection.apply(query);
  kernels::omp::correlate(features_p4, projected,
                          {0, 0, features_p4.height(), features_p4.width()}, out);
  return out;
}

BinaryMask binarize(const ScalarMap& probs, float tau,
                    std::optional<TargetSize> target, Upsample mode) {
  if (!target || (target->height == probs.height() &&
                  target->width == probs.width() && probs.stride() == 1)) {
    MaskGrid grid(probs.height(), probs.width());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      grid.data()[i] = probs.data()[i] > tau;
    }
    return rle_encode(grid);
  }
  MaskGrid grid(target->height, target->width);
  if (probs.height() == 0 || probs.width() == 0) return rle_encode(grid);
  const double s = probs.stride();
  const int gh = probs.height(), gw = probs.width();
  for (int py = 0; py < target->height; ++py) {
    const double v = (py + 0.5) / s - 0.5;
    for (int px = 0; px < target->width; ++px) {
      const double u = (px + 0.5) / s - 0.5;
      double value;
      if (mode == Upsample::kNearest) {
        const int cx = std::clamp(static_cast<int>(std::floor((px + 0.5) / s)), 0, gw - 1);
        const int cy = std::clamp(static_cast<int>(std::floor((py + 0.5) / s)), 0, gh - 1);
        value = probs.at(cy, cx);
      } else {
        const double uc = std::clamp(u, 0.0, gw - 1.0);
        const double vc = std::clamp(v, 0.0, gh - 1.0);
        const int x0 = static_cast<int>(std::floor(uc));
        const int y0 = static_cast<int>(std::floor(vc));
        const int x1 = std::min(x0 + 1, gw - 1);
        const int y1 = std::min(y0 + 1, gh - 1);
        const double fx = uc - x0, fy = vc - y0;
        const double top = (1 - fx) * probs.at(y0, x0) + fx * probs.at(y0, x1);
        const double bot = (1 - fx) * probs.at(y1, x0) + fx * probs.at(y1, x1);
        value = (1 - fy) * top + fy * bot;
      }
      grid.set(py, px, value > tau);
    }
  }
  return rle_encode(grid);
}

InstancePrediction predict_thing(const FeatureMap& features_p4,
                                 std::span<const float> query,
                                 const Box& query_box,
                                 std::vector<float> class_probs,
                                 const MaskProjection& projection, int image_w,
                                 int image_h, const DilationConfig& dilation) {
  InstancePrediction p;
  p.class_probs = std::move(class_probs);
  p.box = to_normalized(query_box, image_w, image_h);
  p.mask = thing_mask(features_p4, query, query_box, projection, image_w, image_h,
                      dilation)
               .probs;
  p.is_thing = true;
  return p;
}

InstancePrediction predict_stuff(const FeatureMap& features_p4,
                                 std::span<const float> query,
                                 std::vector<float> class_probs,
                                 const MaskProjection& projection) {
  InstancePrediction p;
  p.class_probs = std::move(class_probs);
  p.mask = stuff_mask(features_p4, query, projection);
  p.is_thing = false;
  return p;
}

}  // namespace ocseg
