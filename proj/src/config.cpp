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

#include "ocseg/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "ocseg/error.hpp"

namespace ocseg {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::kMalformedManifest, "config: " + what);
}

// Reads the keys of one section, rejecting any it was not asked about.
class Section {
 public:
  Section(const json& root, const std::string& name) : name_(name) {
    if (!root.contains(name)) return;
    node_ = &root.at(name);
    if (!node_->is_object()) fail(name + " must be an object");
  }

  void finish() const {
    if (node_ == nullptr) return;
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.contains(key)) fail("unknown key " + name_ + "." + key);
    }
  }

  template <typename T>
  void read(const std::string& key, T& field) {
    seen_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    const json& v = node_->at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(name_ + "." + key + " must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(name_ + "." + key + " must be an integer");
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(name_ + "." + key + " must be a number");
    }
    field = v.get<T>();
  }

  template <typename E>
  void read_enum(const std::string& key, E& field,
                 std::initializer_list<std::pair<const char*, E>> names) {
    seen_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return;
    const json& v = node_->at(key);
    if (v.is_string()) {
      for (const auto& [n, e] : names) {
        if (v.get<std::string>() == n) {
          field = e;
          return;
        }
      }
    }
    fail(name_ + "." + key + " has an unknown value");
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (node_ == nullptr || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

const std::initializer_list<std::pair<const char*, Upsample>> kUpsampleNames = {
    {"bilinear", Upsample::kBilinear}, {"nearest", Upsample::kNearest}};

json edges_to_json(const std::vector<double>& edges) {
  json out = json::array();
  for (const double e : edges) {
    if (std::isinf(e)) {
      out.push_back(nullptr);
    } else {
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace

Config config_from_json(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  static const std::set<std::string> kSections = {
      "ocp", "centers", "mask", "loss_weights", "focal",
      "matching", "fusion", "copy_paste", "metrics"};
  for (const auto& [key, value] : j.items()) {
    if (!kSections.contains(key)) fail("unknown section " + key);
  }

  Config c;
  {
    Section s(j, "ocp");
    s.read("n_things", c.ocp.n_things);
    s.read("n_stuff", c.ocp.n_stuff);
    s.read("nms_window", c.ocp.nms_window);
    s.read("prob_floor", c.ocp.prob_floor);
    s.read("theta_fraction", c.ocp.theta_fraction);
    s.read("normalize_content", c.ocp.normalize_content);
    s.finish();
  }
  {
    Section s(j, "centers");
    s.read("sigma2", c.centers.sigma2);
    s.read("radius_sigmas", c.centers.radius_sigmas);
    s.finish();
  }
  {
    Section s(j, "mask");
    s.read("dilation_fraction", c.mask.dilation.fraction);
    s.read("dilation_cap_px", c.mask.dilation.cap_px);
    s.read_enum("dilation_cap", c.mask.dilation.cap,
                {{"min", DilationCap::kMin}, {"max", DilationCap::kMax}});
    s.read("threshold", c.mask.threshold);
    s.read_enum("upsample", c.mask.upsample, kUpsampleNames);
    s.finish();
  }
  {
    Section s(j, "loss_weights");
    s.read("obj", c.loss_weights.obj);
    s.read("reg", c.loss_weights.reg);
    s.read("center", c.loss_weights.center);
    s.read("cls", c.loss_weights.cls);
    s.read("mask", c.loss_weights.mask);
    s.read("box", c.loss_weights.box);
    s.finish();
  }
  {
    Section s(j, "focal");
    s.read("alpha", c.focal.alpha);
    s.read("gamma", c.focal.gamma);
    s.finish();
  }
  {
    Section s(j, "matching");
    s.read("theta_fp", c.refinement.theta_fp);
    s.read("theta_fn", c.refinement.theta_fn);
    s.read_enum("stage2_overlap", c.stage2_overlap,
                {{"box", OverlapMode::kBox}, {"mask", OverlapMode::kMask}});
    s.read("box_shift", c.box_noise.shift);
    s.read("box_scale", c.box_noise.scale);
    s.read("n_mask_conditioned", c.n_mask_conditioned);
    s.read("nms_iou", c.nms_iou);
    s.finish();
  }
  {
    Section s(j, "fusion");
    s.read("confidence_floor", c.fusion.confidence_floor);
    s.read("retention", c.fusion.retention);
    s.read("stuff_min_area", c.fusion.stuff_min_area);
    s.read("mask_threshold", c.fusion.mask_threshold);
    s.read_enum("upsample", c.fusion.upsample, kUpsampleNames);
    s.finish();
  }
  {
    Section s(j, "copy_paste");
    s.read("max_retries", c.copy_paste.max_retries);
    s.finish();
  }
  {
    Section s(j, "metrics");
    if (const json* bins = s.raw("size_bins")) {
      if (!bins->is_array()) fail("metrics.size_bins must be an array");
      c.size_bins.clear();
      for (const json& e : *bins) {
        if (e.is_null()) {
          c.size_bins.push_back(std::numeric_limits<double>::infinity());
        } else if (e.is_number()) {
          c.size_bins.push_back(e.get<double>());
        } else {
          fail("metrics.size_bins entries must be numbers or null");
        }
      }
    }
    s.finish();
  }

  try {
    validate(c.refinement);
    validate(c.fusion);
    DetectionCounts check(c.size_bins);
  } catch (const Error& e) {
    fail(e.what());
  }
  if (c.ocp.n_things < 0 || c.ocp.n_stuff < 0 || c.ocp.nms_window < 1 ||
      c.centers.sigma2 <= 0.0 || c.n_mask_conditioned < 0 ||
      c.n_mask_conditioned > kMaxMaskConditionedQueries ||
      c.copy_paste.max_retries < 1) {
    fail("value out of range");
  }
  return c;
}

json config_to_json(const Config& c) {
  const auto upsample = [](Upsample u) {
    return u == Upsample::kBilinear ? "bilinear" : "nearest";
  };
  return {
      {"ocp",
       {{"n_things", c.ocp.n_things},
        {"n_stuff", c.ocp.n_stuff},
        {"nms_window", c.ocp.nms_window},
        {"prob_floor", c.ocp.prob_floor},
        {"theta_fraction", c.ocp.theta_fraction},
        {"normalize_content", c.ocp.normalize_content}}},
      {"centers",
       {{"sigma2", c.centers.sigma2}, {"radius_sigmas", c.centers.radius_sigmas}}},
      {"mask",
       {{"dilation_fraction", c.mask.dilation.fraction},
        {"dilation_cap_px", c.mask.dilation.cap_px},
        {"dilation_cap", c.mask.dilation.cap == DilationCap::kMin ? "min" : "max"},
        {"threshold", c.mask.threshold},
        {"upsample", upsample(c.mask.upsample)}}},
      {"loss_weights",
       {{"obj", c.loss_weights.obj},
        {"reg", c.loss_weights.reg},
        {"center", c.loss_weights.center},
        {"cls", c.loss_weights.cls},
        {"mask", c.loss_weights.mask},
        {"box", c.loss_weights.box}}},
      {"focal", {{"alpha", c.focal.alpha}, {"gamma", c.focal.gamma}}},
      {"matching",
       {{"theta_fp", c.refinement.theta_fp},
        {"theta_fn", c.refinement.theta_fn},
        {"stage2_overlap", c.stage2_overlap == OverlapMode::kBox ? "box" : "mask"},
        {"box_shift", c.box_noise.shift},
        {"box_scale", c.box_noise.scale},
        {"n_mask_conditioned", c.n_mask_conditioned},
        {"nms_iou", c.nms_iou}}},
      {"fusion",
       {{"confidence_floor", c.fusion.confidence_floor},
        {"retention", c.fusion.retention},
        {"stuff_min_area", c.fusion.stuff_min_area},
        {"mask_threshold", c.fusion.mask_threshold},
        {"upsample", upsample(c.fusion.upsample)}}},
      {"copy_paste", {{"max_retries", c.copy_paste.max_retries}}},
      {"metrics", {{"size_bins", edges_to_json(c.size_bins)}}},
  };
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open config " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace ocseg
